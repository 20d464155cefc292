import json
import math
import tempfile
from io import StringIO
from pathlib import Path
from unittest import mock

from django.conf import settings
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from erasure import campaigns
from erasure.entropy import LN2, holevo_chi
from erasure.serializers import load_ensemble, load_ensemble_file


def fixture(name):
    return str(Path(settings.FIXTURES_DIR) / name)


def binary_entropy(q):
    return -q * math.log(q) - (1 - q) * math.log(1 - q)


ZERO_PLUS_ENTROPY = binary_entropy((1 + 1 / math.sqrt(2)) / 2)


class CommandTestCase(SimpleTestCase):
    def run_json(self, command, **options):
        out = StringIO()
        call_command(command, format='json', stdout=out, **options)
        return json.loads(out.getvalue())

    def assertExitStatus(self, status, command, **options):
        with self.assertRaises(CommandError) as ctx:
            call_command(command, stdout=StringIO(), **options)
        self.assertEqual(ctx.exception.returncode, status)
        return ctx.exception


class EntropyCommandTests(CommandTestCase):
    def test_orthogonal_pair_is_one_bit(self):
        report = self.run_json('entropy', input=fixture('orthogonal_pair.json'), units='bits')
        self.assertEqual(report['command'], 'entropy')
        self.assertEqual(report['units'], 'bits')
        self.assertAlmostEqual(report['average_entropy'], 1.0, places=11)

    def test_pure_letters_have_zero_entropy(self):
        report = self.run_json('entropy', input=fixture('pure_letters.json'))
        self.assertEqual(len(report['letter_entropy']), 3)
        for value in report['letter_entropy']:
            self.assertAlmostEqual(value, 0.0, places=11)
        self.assertAlmostEqual(report['mean_letter_entropy'], 0.0, places=11)

    def test_zero_plus(self):
        report = self.run_json('entropy', input=fixture('zero_plus.json'), units='bits')
        self.assertAlmostEqual(report['average_entropy'], ZERO_PLUS_ENTROPY / LN2, places=10)
        self.assertAlmostEqual(report['average_entropy'], 0.600876, delta=1e-5)

    def test_table_output(self):
        out = StringIO()
        call_command('entropy', input=fixture('orthogonal_pair.json'), stdout=out)
        self.assertTrue(out.getvalue().startswith('entropy (nats)'))
        self.assertIn('average_entropy', out.getvalue())

    def test_csv_output(self):
        out = StringIO()
        call_command('entropy', input=fixture('pure_letters.json'), format='csv', stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], 'field,value')
        self.assertTrue(lines[1].startswith('letter_entropy[0],'))
        self.assertTrue(lines[3].startswith('letter_entropy[2],'))


class ChiCommandTests(CommandTestCase):
    def test_matches_the_library(self):
        for name in ('orthogonal_pair.json', 'pure_letters.json', 'zero_plus.json'):
            report = self.run_json('chi', input=fixture(name))
            expected = holevo_chi(load_ensemble_file(fixture(name)).ensemble)
            self.assertAlmostEqual(report['chi'], expected, places=11)
            self.assertAlmostEqual(report['chi_via_relative_entropy'], expected, delta=1e-9)

    def test_single_letter_carries_nothing(self):
        report = self.run_json('chi', input=fixture('single_letter.json'))
        self.assertAlmostEqual(report['chi'], 0.0, places=11)

    def test_orthogonal_pair_in_bits(self):
        report = self.run_json('chi', input=fixture('orthogonal_pair.json'), units='bits')
        self.assertAlmostEqual(report['chi'], 1.0, places=11)
        self.assertEqual(report['letter_divergence'], [1.0, 1.0])

    def test_units_are_consistent(self):
        nats = self.run_json('chi', input=fixture('zero_plus.json'), units='nats')
        bits = self.run_json('chi', input=fixture('zero_plus.json'), units='bits')
        self.assertAlmostEqual(bits['chi'], nats['chi'] / LN2, delta=2e-12)
        for b, n in zip(bits['letter_divergence'], nats['letter_divergence']):
            self.assertAlmostEqual(b, n / LN2, delta=2e-12)


class EraseCommandTests(CommandTestCase):
    def test_orthogonal_pair(self):
        report = self.run_json('erase', input=fixture('orthogonal_pair.json'), epsilon_mix=True)
        self.assertAlmostEqual(report['direct_erasure'], LN2, delta=1e-9)
        self.assertAlmostEqual(report['two_step_first'], 0.0, delta=1e-9)
        self.assertAlmostEqual(report['bob_erasure'], LN2, delta=1e-9)
        self.assertTrue(report['epsilon_mix'])

    def test_maximally_mixed_letter_with_its_decomposition(self):
        report = self.run_json('erase', input=fixture('mixed_identity.json'))
        self.assertAlmostEqual(report['direct_erasure'], LN2, places=11)
        self.assertAlmostEqual(report['two_step_first'], LN2, places=11)
        self.assertAlmostEqual(report['bob_erasure'], 0.0, places=11)

    def test_zero_plus(self):
        report = self.run_json('erase', input=fixture('zero_plus.json'), epsilon_mix=True)
        self.assertAlmostEqual(report['direct_erasure'], ZERO_PLUS_ENTROPY, delta=1e-9)
        self.assertAlmostEqual(report['two_step_first'], 0.0, delta=1e-9)
        self.assertAlmostEqual(report['bob_erasure'], ZERO_PLUS_ENTROPY, delta=1e-9)
        self.assertLess(report['protocol_residual'], 1e-9)
        self.assertLess(report['holevo_residual'], 1e-9)

    def test_rank_deficient_bath_without_mixing(self):
        error = self.assertExitStatus(2, 'erase', input=fixture('zero_plus.json'))
        self.assertIn('--epsilon-mix', str(error))


class CapacityCommandTests(CommandTestCase):
    def test_orthogonal_pair(self):
        report = self.run_json('capacity', input=fixture('orthogonal_pair.json'))
        self.assertAlmostEqual(report['chi_star_bits'], 1.0, delta=1e-9)
        self.assertEqual(report['p_star'], [0.5, 0.5])
        self.assertTrue(report['converged'])

    def test_duplicate_states(self):
        report = self.run_json('capacity', input=fixture('duplicate_states.json'))
        self.assertAlmostEqual(report['chi_star_nats'], 0.0, places=11)

    def test_zero_plus(self):
        report = self.run_json('capacity', input=fixture('zero_plus.json'))
        self.assertAlmostEqual(report['chi_star_bits'], 0.600876, delta=1e-5)
        self.assertAlmostEqual(report['chi_star_nats'], ZERO_PLUS_ENTROPY, delta=1e-9)

    def test_states_without_probabilities(self):
        report = self.run_json('capacity', input=fixture('zero_plus_states.json'))
        self.assertAlmostEqual(report['chi_star_nats'], ZERO_PLUS_ENTROPY, delta=1e-9)
        self.assertAlmostEqual(sum(report['p_star']), 1.0, places=11)

    def test_input_probabilities_are_ignored(self):
        report = self.run_json('capacity', input=fixture('corrupted.json'))
        self.assertAlmostEqual(report['chi_star_nats'], ZERO_PLUS_ENTROPY, delta=1e-9)

    def test_budget_exhaustion_is_a_result(self):
        with override_settings(ERASURE_CHI={'MAX_ITER': 1}):
            report = self.run_json('capacity', input=fixture('pure_letters.json'), tol=1e-14)
        self.assertFalse(report['converged'])
        self.assertEqual(report['iterations'], 1)


class VerifyCommandTests(CommandTestCase):
    options = {'seed': 7, 'trials': 8, 'dims': '2,3', 'letters': 3}

    def test_all_suites_pass(self):
        report = self.run_json('verify', **self.options)
        self.assertTrue(report['passed'])
        self.assertEqual(report['seed'], 7)
        self.assertEqual(report['dims'], [2, 3])
        self.assertEqual(report['landauer_trials'], 8)
        self.assertEqual(report['gradient_failures'], 0)
        self.assertIsNone(report['holevo_bound_first_failure'])

    def test_seeded_runs_are_byte_identical(self):
        first, second = StringIO(), StringIO()
        call_command('verify', format='json', stdout=first, **self.options)
        call_command('verify', format='json', stdout=second, **self.options)
        self.assertEqual(first.getvalue(), second.getvalue())

    def test_seed_from_settings(self):
        with override_settings(ERASURE_CHI={'DEFAULT_SEED': 123}):
            report = self.run_json('verify', trials=2, dims='2', letters=2)
        self.assertEqual(report['seed'], 123)

    def test_input_ensemble_is_checked(self):
        report = self.run_json('verify', input=fixture('mixed_identity.json'), **self.options)
        self.assertTrue(report['passed'])
        self.assertEqual(report['input_trials'], 1)
        self.assertTrue(report['input_passed'])

    def test_corrupted_input(self):
        error = self.assertExitStatus(2, 'verify', input=fixture('corrupted.json'), **self.options)
        self.assertIn('ValidationError(probabilities)', str(error))

    def test_malformed_input(self):
        error = self.assertExitStatus(2, 'verify', input=fixture('malformed.json'), **self.options)
        self.assertIn('ParseError', str(error))

    def test_failing_suite_exits_with_one(self):
        broken = (('always_off', lambda rng, dim, context: 1.0),)
        out = StringIO()
        with mock.patch.object(campaigns, 'SUITES', broken):
            with self.assertRaises(CommandError) as ctx:
                call_command('verify', format='json', stdout=out, **self.options)
        self.assertEqual(ctx.exception.returncode, 1)
        self.assertIn('--seed 7', str(ctx.exception))
        report = json.loads(out.getvalue())
        self.assertFalse(report['passed'])
        self.assertEqual(report['always_off_first_failure'], 0)


class SweepCommandTests(CommandTestCase):
    def test_csv_columns(self):
        out = StringIO()
        call_command('sweep', points=10, format='csv', stdout=out)
        lines = out.getvalue().splitlines()
        self.assertEqual(lines[0], 'theta,overlap,chi,average_entropy,measured_info')
        self.assertEqual(len(lines), 11)

    def test_measurement_stays_below_chi(self):
        report = self.run_json('sweep', points=25, units='bits')
        self.assertAlmostEqual(report['theta'][-1], math.pi / 2, places=11)
        self.assertAlmostEqual(report['chi'][-1], 1.0, places=11)
        for chi, measured in zip(report['chi'], report['measured_info']):
            self.assertLessEqual(measured, chi + 1e-12)

    def test_needs_points(self):
        self.assertExitStatus(2, 'sweep', points=0)


class InputErrorTests(CommandTestCase):
    def test_corrupted_file(self):
        error = self.assertExitStatus(2, 'chi', input=fixture('corrupted.json'))
        self.assertIn('ValidationError(probabilities)', str(error))

    def test_non_hermitian_file(self):
        error = self.assertExitStatus(2, 'entropy', input=fixture('non_hermitian.json'))
        self.assertIn('hermiticity', str(error))

    def test_malformed_file(self):
        error = self.assertExitStatus(2, 'capacity', input=fixture('malformed.json'))
        self.assertIn('ParseError', str(error))

    def test_missing_input(self):
        self.assertExitStatus(2, 'erase')

    def test_bad_configuration(self):
        self.assertExitStatus(2, 'verify', trials=0)
        self.assertExitStatus(2, 'verify', dims='1,2')
        self.assertExitStatus(2, 'verify', dims='two')
        self.assertExitStatus(2, 'capacity', input=fixture('orthogonal_pair.json'), tol=-1.0)
        self.assertExitStatus(2, 'verify', seed=-1)


class PopulateEnsembleTests(SimpleTestCase):
    def test_writes_a_loadable_ensemble_to_stdout(self):
        out = StringIO()
        call_command('populate_ensemble', dim=3, letters=4, seed=5, stdout=out)
        ensemble = load_ensemble(out.getvalue())
        self.assertEqual(ensemble.dim, 3)
        self.assertEqual(len(ensemble), 4)

    def test_same_seed_same_file(self):
        first, second = StringIO(), StringIO()
        call_command('populate_ensemble', seed=5, stdout=first)
        call_command('populate_ensemble', seed=5, stdout=second)
        self.assertEqual(first.getvalue(), second.getvalue())

    def test_output_file_with_decompositions(self):
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'generated.json'
            out = StringIO()
            call_command(
                'populate_ensemble', dim=2, letters=2, max_rank=1, with_decomposition=True,
                output=str(path), stdout=out,
            )
            document = load_ensemble_file(path)
        self.assertIn('Wrote 2 letters', out.getvalue())
        self.assertTrue(all(terms is not None for terms in document.decompositions))
        self.assertEqual({rho.rank for rho in document.ensemble.states}, {1})

    def test_invalid_rank(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('populate_ensemble', dim=2, max_rank=3, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_zero_letters_is_refused(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('populate_ensemble', letters=0, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)

    def test_negative_seed_is_refused(self):
        with self.assertRaises(CommandError) as ctx:
            call_command('populate_ensemble', seed=-1, stdout=StringIO())
        self.assertEqual(ctx.exception.returncode, 2)
        self.assertIn('--seed', str(ctx.exception))
