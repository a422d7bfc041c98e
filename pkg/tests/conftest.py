"""Shared corpora and helpers for the test suite.

The matrix corpus is seeded once and reused session-wide so the
acceptance timings exclude generation cost and every module sees the
same cases.
"""

import itertools

import numpy as np
import pytest

from daggermp import (
    ComplexMatrix,
    FiniteRelation,
    MatrixInstance,
    PartialInjection,
    PInjInstance,
    RelInstance,
    Tolerance,
)

CORPUS_SEED = 20260816


def uniform_complex(rng, n, m):
    return rng.uniform(-1.0, 1.0, (n, m)) + 1j * rng.uniform(-1.0, 1.0, (n, m))


def make_matrix_corpus(seed=CORPUS_SEED, count=1000, max_dim=8):
    """Random complex matrices; every other one a rank-deficient product."""
    rng = np.random.default_rng(seed)
    out = []
    for idx in range(count):
        n = int(rng.integers(1, max_dim + 1))
        m = int(rng.integers(1, max_dim + 1))
        if idx % 2 == 0:
            arr = uniform_complex(rng, n, m)
        else:
            k = int(rng.integers(0, min(n, m)))
            arr = uniform_complex(rng, n, k) @ uniform_complex(rng, k, m)
        out.append(ComplexMatrix(np.ascontiguousarray(arr)))
    return out


class PinnedScaleInstance(MatrixInstance):
    """Matrix instance comparing at eq_tol * max(1, pinned norm).

    The acceptance bounds are stated against the Frobenius norm of the
    matrix under test, not against the operands of each individual
    comparison, so the scale is pinned once per case.
    """

    def __init__(self, pinned, eq_tol):
        super().__init__(Tolerance(eq_tol=eq_tol))
        self._pinned = max(1.0, float(pinned))

    def scale(self, f, g):
        return self._pinned


def all_relations(src, tgt):
    mask = (1 << tgt) - 1
    for code in range(1 << (src * tgt)):
        yield FiniteRelation(
            src, tgt, tuple((code >> (i * tgt)) & mask for i in range(src))
        )


def random_relation(rng, src, tgt):
    return FiniteRelation(
        src, tgt, tuple(int(x) for x in rng.integers(0, 1 << tgt, src))
    )


def all_partial_injections(src, tgt):
    choices = [None] + list(range(tgt))
    for mapping in itertools.product(choices, repeat=src):
        hit = [j for j in mapping if j is not None]
        if len(hit) == len(set(hit)):
            yield PartialInjection(src, tgt, mapping)


def random_partial_injection(rng, src, tgt):
    targets = list(range(tgt))
    rng.shuffle(targets)
    mapping = []
    for i in range(src):
        if targets and rng.random() < 0.7:
            mapping.append(targets.pop())
        else:
            mapping.append(None)
    return PartialInjection(src, tgt, tuple(mapping))


@pytest.fixture(scope="session")
def matrix_corpus():
    return make_matrix_corpus()


@pytest.fixture(scope="session")
def small_matrix_corpus():
    return make_matrix_corpus(seed=CORPUS_SEED + 1, count=120, max_dim=5)


@pytest.fixture
def minst():
    return MatrixInstance(Tolerance(eq_tol=1e-9))


@pytest.fixture
def rel_inst():
    return RelInstance()


@pytest.fixture
def pinj_inst():
    return PInjInstance()
