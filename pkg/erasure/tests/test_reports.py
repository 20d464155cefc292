import json
import math

from django.test import SimpleTestCase, override_settings

from erasure.entropy import LN2
from erasure.reports import Report, render


class RenderTests(SimpleTestCase):
    def setUp(self):
        self.report = (
            Report('chi')
            .entropy('chi', LN2)
            .entropy('letter_divergence', [LN2, math.inf])
            .add('iterations', 3)
            .add('converged', True)
            .add('first_failure', None)
        )

    def test_json_is_flat_and_converts_entropies_only(self):
        payload = json.loads(render(self.report, 'json', 'bits'))
        self.assertEqual(payload['command'], 'chi')
        self.assertEqual(payload['units'], 'bits')
        self.assertEqual(payload['chi'], 1.0)
        self.assertEqual(payload['letter_divergence'], [1.0, 'inf'])
        self.assertEqual(payload['iterations'], 3)
        self.assertIs(payload['converged'], True)
        self.assertIsNone(payload['first_failure'])

    def test_twelve_significant_digits(self):
        payload = json.loads(render(Report('x').entropy('value', 1 / 3), 'json'))
        self.assertEqual(payload['value'], 0.333333333333)

    @override_settings(ERASURE_CHI={'SIGNIFICANT_DIGITS': 4})
    def test_digits_come_from_settings(self):
        payload = json.loads(render(Report('x').entropy('value', 1 / 3), 'json'))
        self.assertEqual(payload['value'], 0.3333)

    def test_csv_expands_lists(self):
        lines = render(self.report, 'csv', 'nats').splitlines()
        self.assertIn('letter_divergence[1],inf', lines)
        self.assertIn('converged,true', lines)
        self.assertIn('first_failure,', lines)

    def test_columnar_table(self):
        report = Report('sweep', columnar=True).add('theta', [0.5, 1.0]).entropy('chi', [0.1, 0.2])
        lines = render(report, 'table').splitlines()
        self.assertEqual(lines[0], 'sweep (nats)')
        self.assertEqual(lines[1].split(), ['theta', 'chi'])
        self.assertEqual(len(lines), 4)

    def test_lookup_by_name(self):
        self.assertEqual(self.report['iterations'], 3)
        with self.assertRaises(KeyError):
            self.report['missing']
