import json
import tempfile
from pathlib import Path

import numpy as np
from django.conf import settings
from django.test import SimpleTestCase
from numpy.testing import assert_array_equal

from erasure.exceptions import ParseError, ValidationError
from erasure.serializers import (
    EnsembleSerializer,
    load_document,
    load_ensemble,
    load_ensemble_file,
    load_states_file,
    save_ensemble,
    save_ensemble_file,
)
from erasure.states import make_rng, pure_decompose, random_ensemble


def fixture(name):
    return Path(settings.FIXTURES_DIR) / name


class LoadTests(SimpleTestCase):
    def test_orthogonal_pair(self):
        document = load_ensemble_file(fixture('orthogonal_pair.json'))
        self.assertEqual(len(document.ensemble), 2)
        self.assertEqual(document.ensemble.dim, 2)
        self.assertEqual(document.decompositions, (None, None))
        assert_array_equal(document.ensemble.states[1].matrix, np.diag([0.0, 1.0]))

    def test_complex_entries(self):
        ensemble = load_ensemble_file(fixture('pure_letters.json')).ensemble
        self.assertEqual(ensemble.states[1].matrix[1, 0], 0.5j)
        self.assertEqual(ensemble.states[1].matrix[0, 1], -0.5j)

    def test_decomposition_is_read(self):
        document = load_ensemble_file(fixture('mixed_identity.json'))
        terms = document.decompositions[0]
        self.assertEqual([r for r, _ in terms], [0.5, 0.5])

    def test_probabilities_that_do_not_sum_to_one(self):
        with self.assertRaises(ValidationError) as ctx:
            load_ensemble_file(fixture('corrupted.json'))
        self.assertEqual(ctx.exception.invariant, 'probabilities')

    def test_non_hermitian_letter(self):
        with self.assertRaises(ValidationError) as ctx:
            load_ensemble_file(fixture('non_hermitian.json'))
        self.assertEqual(ctx.exception.invariant, 'hermiticity')

    def test_malformed_json_reports_the_position(self):
        with self.assertRaises(ParseError) as ctx:
            load_ensemble_file(fixture('malformed.json'))
        self.assertIn('line', ctx.exception.location)

    def test_missing_field_reports_the_path(self):
        with self.assertRaises(ParseError) as ctx:
            load_ensemble_file(fixture('missing_field.json'))
        self.assertIn('letters[0].p', str(ctx.exception))

    def test_missing_file(self):
        with self.assertRaises(ParseError):
            load_ensemble_file(fixture('does_not_exist.json'))

    def test_wrong_matrix_shape(self):
        payload = {'dim': 3, 'letters': [{'p': 1.0, 'rho': [[{'re': 1.0, 'im': 0.0}]]}]}
        with self.assertRaises(ParseError) as ctx:
            load_document(json.dumps(payload))
        self.assertIn('3x3', str(ctx.exception))

    def test_top_level_must_be_an_object(self):
        with self.assertRaises(ParseError):
            load_ensemble('[1, 2, 3]')

    def test_decomposition_that_does_not_reconstruct(self):
        payload = json.loads(fixture('mixed_identity.json').read_text())
        payload['letters'][0]['decomposition'][1]['phi'][1]['re'] = 0.7071067811865476
        with self.assertRaises(ValidationError) as ctx:
            load_document(json.dumps(payload))
        self.assertEqual(ctx.exception.invariant, 'decomposition')

    def test_negative_weight_is_a_field_error(self):
        serializer = EnsembleSerializer(data={
            'dim': 1,
            'letters': [{'p': 1.0, 'rho': [[{'re': 1.0, 'im': 0.0}]],
                         'decomposition': [{'r': -1.0, 'phi': [{'re': 1.0, 'im': 0.0}]}]}],
        })
        self.assertFalse(serializer.is_valid())
        self.assertIn('letters', serializer.errors)


class LoadStatesTests(SimpleTestCase):
    def test_probabilities_may_be_left_out(self):
        states = load_states_file(fixture('zero_plus_states.json'))
        self.assertEqual(len(states), 2)
        assert_array_equal(states[0].matrix, np.diag([1.0, 0.0]))

    def test_probabilities_are_not_checked(self):
        states = load_states_file(fixture('corrupted.json'))
        self.assertEqual(len(states), 2)

    def test_states_are_still_validated(self):
        with self.assertRaises(ValidationError) as ctx:
            load_states_file(fixture('non_hermitian.json'))
        self.assertEqual(ctx.exception.invariant, 'hermiticity')

    def test_ensemble_loader_still_needs_probabilities(self):
        with self.assertRaises(ParseError):
            load_ensemble_file(fixture('zero_plus_states.json'))


class SaveTests(SimpleTestCase):
    def test_save_then_load_is_exact(self):
        ensemble = random_ensemble(3, 4, None, make_rng(61))
        again = load_ensemble(save_ensemble(ensemble))
        assert_array_equal(again.probabilities, ensemble.probabilities)
        for a, b in zip(again.states, ensemble.states):
            assert_array_equal(a.matrix, b.matrix)

    def test_file_with_decompositions(self):
        ensemble = random_ensemble(2, 2, None, make_rng(62))
        decompositions = tuple(pure_decompose(rho).letters[0] for rho in ensemble.states)
        with tempfile.TemporaryDirectory() as directory:
            path = Path(directory) / 'ensemble.json'
            save_ensemble_file(ensemble, path, decompositions)
            document = load_ensemble_file(path)
            payload = json.loads(path.read_text(encoding='utf-8'))
        self.assertIn('decomposition', payload['letters'][0])
        self.assertEqual(len(document.decompositions[0]), len(decompositions[0]))
