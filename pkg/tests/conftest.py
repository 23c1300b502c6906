import numpy as np
import pytest

from adjrmat.adjoint_tensor import adjoint_rep, build_decomposition
from adjrmat.liealg import build_basis


class _Algebra:
    """Layer-lazy cache: decompositions are only built when requested."""

    def __init__(self):
        self._basis = {}
        self._rep = {}
        self._dec = {}

    def basis(self, n):
        if n not in self._basis:
            self._basis[n] = build_basis(n)
        return self._basis[n]

    def rep(self, n):
        if n not in self._rep:
            self._rep[n] = adjoint_rep(self.basis(n), validate=n <= 5)
        return self._rep[n]

    def dec(self, n):
        if n not in self._dec:
            self._dec[n] = build_decomposition(self.rep(n))
        return self._dec[n]

    def __call__(self, n):
        """(basis, rep, dec) triple; builds the decomposition."""
        return self.basis(n), self.rep(n), self.dec(n)


_ALGEBRA = _Algebra()


@pytest.fixture(scope="session")
def algebra():
    return _ALGEBRA


@pytest.fixture
def rng():
    return np.random.default_rng(20231115)
