"""
The ensemble file format.

    {"dim": d,
     "letters": [{"p": float,
                  "rho": [[{"re": f, "im": f}, ...], ...],
                  "decomposition": [{"r": float, "phi": [{"re": f, "im": f}, ...]}, ...]},
                 ...]}

"decomposition" is optional per letter. Structural problems become
``ParseError`` with the field path; broken invariants (probabilities,
hermiticity, trace, positivity, decomposition) become ``ValidationError``.
"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional, Union

import numpy as np
from rest_framework import serializers

from erasure.exceptions import (
    DimensionMismatch,
    DomainError,
    NonHermitianInput,
    ParseError,
    ValidationError,
)
from erasure.operators import HermitianOperator
from erasure.states import (
    RECONSTRUCTION_TOL,
    DensityMatrix,
    Ensemble,
    PureDecomposition,
    PureState,
    PureTerms,
)


@dataclass(frozen=True, eq=False)
class EnsembleDocument:
    """An ensemble plus the optional per-letter pure decompositions."""
    ensemble: Ensemble
    decompositions: tuple[Optional[PureTerms], ...]


class ComplexSerializer(serializers.Serializer):
    re = serializers.FloatField()
    im = serializers.FloatField()

    def to_representation(self, value: complex) -> dict[str, float]:
        return {'re': float(value.real), 'im': float(value.imag)}


class PureTermSerializer(serializers.Serializer):
    r = serializers.FloatField(min_value=0.0)
    phi = serializers.ListField(child=ComplexSerializer(), allow_empty=False)


class LetterSerializer(serializers.Serializer):
    p = serializers.FloatField()
    rho = serializers.ListField(
        child=serializers.ListField(child=ComplexSerializer(), allow_empty=False),
        allow_empty=False,
    )
    decomposition = PureTermSerializer(many=True, required=False, allow_empty=False)


class EnsembleSerializer(serializers.Serializer):
    """Validates an ensemble document and builds the domain objects."""
    dim = serializers.IntegerField(min_value=1)
    letters = LetterSerializer(many=True, allow_empty=False)

    def validate(self, attrs: dict[str, Any]) -> dict[str, Any]:
        dim = attrs['dim']
        for index, letter in enumerate(attrs['letters']):
            rows = letter['rho']
            if len(rows) != dim or any(len(row) != dim for row in rows):
                raise serializers.ValidationError(
                    {'letters': f'letter {index}: rho must be a {dim}x{dim} matrix'}
                )
            for term in letter.get('decomposition', []):
                if len(term['phi']) != dim:
                    raise serializers.ValidationError(
                        {'letters': f'letter {index}: decomposition vectors need {dim} entries'}
                    )
        return attrs

    def create(self, validated_data: dict[str, Any]) -> EnsembleDocument:
        members = []
        decompositions: list[Optional[PureTerms]] = []
        for index, letter in enumerate(validated_data['letters']):
            rho, terms = _letter(index, letter)
            members.append((letter['p'], rho))
            decompositions.append(terms)
        return EnsembleDocument(ensemble=Ensemble(tuple(members)), decompositions=tuple(decompositions))

    def to_representation(self, instance: EnsembleDocument) -> dict[str, Any]:
        ensemble = instance.ensemble
        complex_field = ComplexSerializer()
        letters = []
        for (p, rho), terms in zip(ensemble, instance.decompositions):
            letter: dict[str, Any] = {
                'p': p,
                'rho': [[complex_field.to_representation(entry) for entry in row] for row in rho.matrix],
            }
            if terms is not None:
                letter['decomposition'] = [
                    {'r': r, 'phi': [complex_field.to_representation(a) for a in state.amplitudes]}
                    for r, state in terms
                ]
            letters.append(letter)
        return {'dim': ensemble.dim, 'letters': letters}


class StateSerializer(LetterSerializer):
    p = serializers.FloatField(required=False)


class StatesSerializer(EnsembleSerializer):
    """
    The same document read as a list of letter states. Probabilities may be
    absent or arbitrary and are not used.
    """
    letters = StateSerializer(many=True, allow_empty=False)

    def create(self, validated_data: dict[str, Any]) -> tuple[DensityMatrix, ...]:
        return tuple(_letter(index, letter)[0] for index, letter in enumerate(validated_data['letters']))


def _complex(entry: dict[str, float]) -> complex:
    return complex(entry['re'], entry['im'])


def _letter(index: int, letter: dict[str, Any]) -> tuple[DensityMatrix, Optional[PureTerms]]:
    matrix = np.array([[_complex(entry) for entry in row] for row in letter['rho']])
    try:
        rho = DensityMatrix(HermitianOperator(matrix))
    except NonHermitianInput as exc:
        raise ValidationError('hermiticity', f'letter {index}: {exc}') from exc
    except (DomainError, DimensionMismatch) as exc:
        raise ValidationError('dimension', f'letter {index}: {exc}') from exc
    if 'decomposition' not in letter:
        return rho, None

    terms = tuple(
        (term['r'], PureState(np.array([_complex(entry) for entry in term['phi']])))
        for term in letter['decomposition']
    )
    error = PureDecomposition((terms,)).reconstruction_error(0, rho)
    if error > RECONSTRUCTION_TOL:
        raise ValidationError('decomposition', f'letter {index} is reconstructed within {error:.3e} only')
    return rho, terms


def _error_paths(errors: Any, prefix: str = '') -> list[str]:
    """Flatten DRF's nested error structure into 'letters[0].rho: message' lines."""
    if isinstance(errors, dict):
        lines = []
        for key, value in errors.items():
            name = key if key != 'non_field_errors' else ''
            if isinstance(key, int):
                path = f'{prefix}[{key}]'
            else:
                path = f'{prefix}.{name}' if prefix and name else (name or prefix)
            lines.extend(_error_paths(value, path))
        return lines
    if isinstance(errors, list):
        if all(isinstance(item, str) for item in errors):
            return [f'{prefix}: {item}' if prefix else str(item) for item in errors]
        lines = []
        for index, item in enumerate(errors):
            if item:
                lines.extend(_error_paths(item, f'{prefix}[{index}]'))
        return lines
    return [f'{prefix}: {errors}']


def _payload(data: Union[bytes, str]) -> dict[str, Any]:
    try:
        text = data.decode('utf-8') if isinstance(data, bytes) else data
        payload = json.loads(text)
    except UnicodeDecodeError as exc:
        raise ParseError(f'not UTF-8: {exc}') from exc
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f'line {exc.lineno} column {exc.colno}') from exc
    if not isinstance(payload, dict):
        raise ParseError('top level must be a JSON object')
    return payload


def _save_valid(serializer: serializers.Serializer) -> Any:
    if not serializer.is_valid():
        raise ParseError('; '.join(_error_paths(serializer.errors)))
    return serializer.save()


def _read(path: Union[str, Path]) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from exc


def load_document(data: Union[bytes, str]) -> EnsembleDocument:
    return _save_valid(EnsembleSerializer(data=_payload(data)))


def load_states(data: Union[bytes, str]) -> tuple[DensityMatrix, ...]:
    """Letter states only; ``p`` may be missing or not sum to one."""
    return _save_valid(StatesSerializer(data=_payload(data)))


def load_ensemble(data: Union[bytes, str]) -> Ensemble:
    return load_document(data).ensemble


def save_document(document: EnsembleDocument) -> bytes:
    return json.dumps(EnsembleSerializer(document).data, indent=2).encode('utf-8')


def save_ensemble(
    ensemble: Ensemble,
    decompositions: Optional[tuple[Optional[PureTerms], ...]] = None,
) -> bytes:
    """Serialize; floats are written in shortest round-trip form."""
    decompositions = decompositions or (None,) * len(ensemble)
    return save_document(EnsembleDocument(ensemble, decompositions))


def load_ensemble_file(path: Union[str, Path]) -> EnsembleDocument:
    return load_document(_read(path))


def load_states_file(path: Union[str, Path]) -> tuple[DensityMatrix, ...]:
    return load_states(_read(path))


def save_ensemble_file(
    ensemble: Ensemble,
    path: Union[str, Path],
    decompositions: Optional[tuple[Optional[PureTerms], ...]] = None,
) -> None:
    Path(path).write_bytes(save_ensemble(ensemble, decompositions))
