"""Adjoint representation of su(n) and the decomposition of its tensor square.

Vectors of the two-site module live in coordinates: an element
sum_{a,b} v^{ab} I^a (x) I^b of su(n) (x) su(n) is stored as the flat complex
array v of length (n^2-1)^2 with row-major index a*(n^2-1)+b, matching the
Kronecker-product convention of :mod:`adjrmat.numerics`.

Two distinct objects both called "Casimir" are kept strictly separate:

* the *element* Omega = sum_a I^a (x) I^a, an n^2 x n^2 matrix used inside
  the highest-weight-vector formulas (products taken in the fundamental
  tensor-square space);
* the *operator* Omega_op = sum_a S^a (x) S^a acting on the adjoint two-site
  coordinates, whose eigenvalues label the irreducible submodules.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .liealg import SunBasis, matrix_unit
from .numerics import DEFAULT_TOL, Tolerance, extend_orthonormal, kron, max_abs

__all__ = [
    "AdjointRep",
    "HighestWeight",
    "Submodule",
    "Decomposition",
    "ROLE_ORDER",
    "adjoint_rep",
    "ad_matrix",
    "coords_of",
    "from_coords",
    "tensor_coords",
    "tensor_from_coords",
    "casimir_element",
    "casimir_op",
    "apply_casimir",
    "permutation_op",
    "apply_swap",
    "apply_pair",
    "lowering_ops",
    "raising_ops",
    "highest_weight_vectors",
    "generate_submodule",
    "build_decomposition",
]

# canonical submodule order (table order); "mixed_sym" is absent for n = 3
ROLE_ORDER = (
    "sym_top",
    "anti_left",
    "anti_right",
    "mixed_sym",
    "adjoint_sym",
    "adjoint_anti",
    "singlet",
)


@dataclass(frozen=True)
class AdjointRep:
    """Adjoint representation: S^a = ad(I^a), Hermitian (n^2-1)-dim matrices."""

    basis: SunBasis
    S: np.ndarray  # (m, m, m) stack, S[a] = matrix of ad(I^a)

    @property
    def n(self) -> int:
        return self.basis.n

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class HighestWeight:
    """One row of the highest-weight-vector table for the tensor square."""

    role: str
    label: str
    parity: int
    coords: np.ndarray


@dataclass
class Submodule:
    """Irreducible factor of adjoint (x) adjoint.

    ``basis`` holds orthonormal coordinate columns; the projector is
    materialized lazily as basis @ basis^dagger.
    """

    label: str
    role: str
    hw_vector: np.ndarray
    basis: np.ndarray  # (D, dim) orthonormal columns
    omega_eigenvalue: float
    exchange_parity: int
    _projector: np.ndarray | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def projector(self) -> np.ndarray:
        if self._projector is None:
            self._projector = self.basis @ np.conj(self.basis).T
        return self._projector


@dataclass
class Decomposition:
    """Full decomposition of the adjoint tensor square with the s->a isometry."""

    n: int
    rep: AdjointRep
    submodules: list[Submodule]
    iso_s_to_a: np.ndarray

    def by_role(self, role: str) -> Submodule:
        for sub in self.submodules:
            if sub.role == role:
                return sub
        raise KeyError(f"no submodule with role {role!r}")


def adjoint_rep(basis: SunBasis, tol: Tolerance = DEFAULT_TOL, validate: bool = True) -> AdjointRep:
    """Build S^a = ad(I^a); entries (S^a)_{bc} = f^{acb} = tr(I^b [I^a, I^c]).

    Validates Hermiticity, the representation property
    [S^a, S^b] = sum_c f^{abc} S^c, and the Casimir sum
    sum_a S^a S^a = 2n * 1.
    """
    S = basis.f.transpose(0, 2, 1).copy()
    if validate:
        m = basis.dim
        if max_abs(S - np.conj(S).transpose(0, 2, 1)) > tol.abs_tol:
            raise AssertionError("adjoint matrices are not Hermitian")
        for a in range(m):
            comm = S[a] @ S - S @ S[a]
            rhs = np.einsum("bc,cij->bij", basis.f[a], S)
            if max_abs(comm - rhs) > tol.abs_tol * m:
                raise AssertionError("adjoint matrices violate the representation property")
        cas = np.einsum("aij,ajk->ik", S, S, optimize=True)
        if max_abs(cas - 2.0 * basis.n * np.eye(m)) > tol.abs_tol * m:
            raise AssertionError("adjoint Casimir sum deviates from 2n * 1")
    return AdjointRep(basis=basis, S=S)


def ad_matrix(basis: SunBasis, x: np.ndarray) -> np.ndarray:
    """Matrix of ad(x) on coordinates: A_{ab} = tr(I^a [x, I^b])."""
    gens = basis.generators
    comm = np.einsum("ij,bjk->bik", x, gens) - np.einsum("bij,jk->bik", gens, x)
    return np.einsum("aij,bji->ab", gens, comm, optimize=True)


def coords_of(basis: SunBasis, x: np.ndarray) -> np.ndarray:
    """Coordinates w^a = tr(I^a x) of a traceless n x n matrix."""
    return np.einsum("aij,ji->a", basis.generators, x, optimize=True)


def from_coords(basis: SunBasis, w: np.ndarray) -> np.ndarray:
    return np.einsum("a,aij->ij", w, basis.generators)


def casimir_element(basis: SunBasis) -> np.ndarray:
    """The element Omega = sum_a I^a (x) I^a as an n^2 x n^2 matrix."""
    g = basis.generators
    return np.einsum("aij,akl->ikjl", g, g, optimize=True).reshape(basis.n**2, basis.n**2)


def tensor_coords(
    basis: SunBasis,
    y: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    check: bool = True,
) -> np.ndarray:
    """Expand an n^2 x n^2 matrix over the I^a (x) I^b basis.

    Returns the flat coordinate vector of length (n^2-1)^2.  When ``check``
    is set, an expansion residual above ``tol.abs_tol`` (the matrix does not
    lie in su(n) (x) su(n)) raises, which signals a convention bug upstream.
    """
    n, g = basis.n, basis.generators
    y4 = y.reshape(n, n, n, n)
    z = np.einsum("aij,jlik->alk", g, y4, optimize=True)
    c = np.einsum("bkl,alk->ab", g, z, optimize=True)
    if check:
        recon = np.einsum("ab,aij,bkl->ikjl", c, g, g, optimize=True).reshape(n * n, n * n)
        res = max_abs(recon - y)
        if res > tol.abs_tol * basis.dim:
            raise ValueError(f"expansion residual {res:.3e}: matrix is outside su(n) (x) su(n)")
    return c.ravel()


def tensor_from_coords(basis: SunBasis, v: np.ndarray) -> np.ndarray:
    m, g = basis.dim, basis.generators
    c = v.reshape(m, m)
    n = basis.n
    return np.einsum("ab,aij,bkl->ikjl", c, g, g, optimize=True).reshape(n * n, n * n)


def casimir_op(rep: AdjointRep) -> np.ndarray:
    """Omega_op = sum_a S^a (x) S^a on the two-site coordinates (dense)."""
    m = rep.dim
    t = np.tensordot(rep.S, rep.S, axes=(0, 0))  # (i, j, k, l)
    return np.ascontiguousarray(t.transpose(0, 2, 1, 3)).reshape(m * m, m * m)


def apply_casimir(rep: AdjointRep, v: np.ndarray, chunk: int = 64) -> np.ndarray:
    """Apply Omega_op to flat coordinates; v may be (D,) or (D, batch)."""
    S = rep.S
    m = rep.dim
    single = v.ndim == 1
    block = v.reshape(m, m, 1) if single else v.reshape(m, m, -1)
    out = np.empty_like(block)
    for s in range(0, block.shape[2], chunk):
        piece = block[:, :, s : s + chunk]
        t = np.einsum("aij,jlp->ailp", S, piece, optimize=True)
        out[:, :, s : s + chunk] = np.einsum("ailp,akl->ikp", t, S, optimize=True)
    return out.reshape(-1) if single else out.reshape(m * m, -1)


def permutation_op(dim_v: int) -> np.ndarray:
    """Swap operator sigma on V (x) V for dim(V) = dim_v; sigma(v (x) w) = w (x) v."""
    d2 = dim_v * dim_v
    sigma = np.zeros((d2, d2), dtype=complex)
    idx = np.arange(d2)
    i, j = divmod(idx, dim_v)
    sigma[idx, j * dim_v + i] = 1.0
    return sigma


def apply_swap(v: np.ndarray, dim_v: int) -> np.ndarray:
    if v.ndim == 1:
        return v.reshape(dim_v, dim_v).T.reshape(-1)
    return v.reshape(dim_v, dim_v, -1).transpose(1, 0, 2).reshape(dim_v * dim_v, -1)


def apply_pair(a: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Apply a (x) 1 + 1 (x) a to flat two-site coordinates (batched)."""
    m = a.shape[0]
    if v.ndim == 1:
        mat = v.reshape(m, m)
        return (a @ mat + mat @ a.T).reshape(-1)
    block = v.reshape(m, m, -1)
    out = np.einsum("ij,jkp->ikp", a, block) + np.einsum("ikp,jk->ijp", block, a)
    return out.reshape(m * m, -1)


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def lowering_ops(rep: AdjointRep) -> np.ndarray:
    """Stack of ad(e_ji) for i < j in lexicographic (i, j) order."""
    ops = [
        ad_matrix(rep.basis, matrix_unit(rep.basis, j, i, coords=False).matrix)
        for i, j in _pairs(rep.n)
    ]
    return np.stack(ops)


def raising_ops(rep: AdjointRep) -> np.ndarray:
    """Stack of ad(e_ij) for i < j in lexicographic (i, j) order."""
    ops = [
        ad_matrix(rep.basis, matrix_unit(rep.basis, i, j, coords=False).matrix)
        for i, j in _pairs(rep.n)
    ]
    return np.stack(ops)


def _labels(n: int) -> dict[str, str]:
    zeros = "0" * (n - 3)
    labels = {
        "sym_top": f"(2{zeros}2)s",
        "adjoint_sym": f"(1{zeros}1)s",
        "adjoint_anti": f"(1{zeros}1)a",
        "singlet": f"({'0' * (n - 1)})s",
    }
    if n == 3:
        labels["anti_left"] = "(30)a"
        labels["anti_right"] = "(03)a"
    else:
        labels["anti_left"] = f"(2{'0' * (n - 4)}10)a"
        labels["anti_right"] = f"(01{'0' * (n - 4)}2)a"
    if n == 4:
        labels["mixed_sym"] = "(020)s"
    elif n >= 5:
        labels["mixed_sym"] = f"(01{'0' * (n - 5)}10)s"
    return labels


def highest_weight_vectors(
    basis: SunBasis,
    tol: Tolerance = DEFAULT_TOL,
    with_alternatives: bool = False,
):
    """Highest-weight vectors of the tensor-square submodules, in table order.

    The adjoint-copy rows are built in the fundamental tensor-square space
    ({Omega, 1 (x) e_1n} etc. as n^2 x n^2 products) and re-expanded into
    I^a (x) I^b coordinates by trace projection.  With ``with_alternatives``
    the equivalent d/f-contraction forms of the two adjoint rows are returned
    as well (for cross-checking).
    """
    n = basis.n
    labels = _labels(n)
    w_1n = matrix_unit(basis, 1, n).coords
    w_1n1 = matrix_unit(basis, 1, n - 1).coords
    w_2n = matrix_unit(basis, 2, n).coords

    def outer(u, v):
        return np.outer(u, v).ravel()

    rows: list[HighestWeight] = []
    rows.append(HighestWeight("sym_top", labels["sym_top"], 1, outer(w_1n, w_1n)))
    rows.append(
        HighestWeight(
            "anti_left", labels["anti_left"], -1, outer(w_1n1, w_1n) - outer(w_1n, w_1n1)
        )
    )
    rows.append(
        HighestWeight(
            "anti_right", labels["anti_right"], -1, outer(w_2n, w_1n) - outer(w_1n, w_2n)
        )
    )
    if n >= 4:
        w_2n1 = matrix_unit(basis, 2, n - 1).coords
        sym = (
            outer(w_2n1, w_1n)
            + outer(w_1n, w_2n1)
            - outer(w_1n1, w_2n)
            - outer(w_2n, w_1n1)
        )
        rows.append(HighestWeight("mixed_sym", labels["mixed_sym"], 1, sym))

    # adjoint copies: products taken in the fundamental (x) fundamental space
    omega = casimir_element(basis)
    one_e1n = kron(np.eye(n), matrix_unit(basis, 1, n, coords=False).matrix)
    e1n_one = kron(matrix_unit(basis, 1, n, coords=False).matrix, np.eye(n))
    v_s_mat = n * (omega @ one_e1n + one_e1n @ omega - (2.0 / n) * e1n_one)
    v_a_mat = np.sqrt(n * n - 4.0) * (omega @ one_e1n - one_e1n @ omega)
    v_s = tensor_coords(basis, v_s_mat, tol)
    v_a = tensor_coords(basis, v_a_mat, tol)
    rows.append(HighestWeight("adjoint_sym", labels["adjoint_sym"], 1, v_s))
    rows.append(HighestWeight("adjoint_anti", labels["adjoint_anti"], -1, v_a))

    rows.append(
        HighestWeight("singlet", labels["singlet"], 1, np.eye(basis.dim, dtype=complex).ravel())
    )

    if not with_alternatives:
        return rows
    alt = {
        "adjoint_sym": n * np.einsum("a,abc->bc", w_1n, basis.d).ravel(),
        "adjoint_anti": np.sqrt(n * n - 4.0) * np.einsum("a,abc->bc", w_1n, basis.f).ravel(),
    }
    return rows, alt


def _orbit(
    rep: AdjointRep,
    seed: np.ndarray,
    tol: Tolerance,
    lows: np.ndarray,
    max_rounds: int | None = None,
) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Close the lowering orbit of ``seed``; returns (basis, word log).

    The word log records, for every basis column after the first, the pair
    (parent column, lowering-operator index) that produced it, so the orbit
    can be replayed verbatim on an equivalent seed.
    """
    m = rep.dim
    D = m * m
    nrm = np.linalg.norm(seed)
    if nrm < tol.rank_tol:
        raise ValueError("highest-weight vector is numerically zero")
    B = (seed / nrm).reshape(D, 1).astype(complex)
    words: list[tuple[int, int]] = []
    frontier = [0]
    nlow = lows.shape[0]
    lows_t = np.ascontiguousarray(lows.transpose(0, 2, 1))
    rounds = 0
    cap = max_rounds if max_rounds is not None else D
    while frontier:
        rounds += 1
        if rounds > cap:
            raise RuntimeError(f"orbit did not close within {cap} rounds")
        p = len(frontier)
        block = np.ascontiguousarray(B[:, frontier]).reshape(m, m, p)
        v_left = block.reshape(m, m * p)  # rows j, columns (k, p)
        v_right = np.ascontiguousarray(block.transpose(0, 2, 1)).reshape(m * p, m)
        # candidate columns in operator-major order: index = op * p + parent
        slab = np.empty((D, nlow * p), dtype=complex)
        for o in range(nlow):
            left = (lows[o] @ v_left).reshape(m, m, p)
            right = (v_right @ lows_t[o]).reshape(m, p, m).transpose(0, 2, 1)
            slab[:, o * p : (o + 1) * p] = (left + right).reshape(D, p)
        # scale-free rank decisions: drop near-null images, normalize the rest
        norms = np.linalg.norm(slab, axis=0)
        keep = np.nonzero(norms >= tol.rank_tol)[0]
        cands = slab[:, keep] / norms[keep]
        new, accepted = extend_orthonormal(B, cands, tol)
        k0 = B.shape[1]
        for ci in accepted:
            orig = int(keep[ci])
            words.append((frontier[orig % p], orig // p))
        if new.shape[1]:
            B = np.hstack([B, new])
        frontier = list(range(k0, B.shape[1]))
    return B, words


def _replay(
    rep: AdjointRep,
    seed: np.ndarray,
    words: list[tuple[int, int]],
    tol: Tolerance,
    lows: np.ndarray,
) -> np.ndarray:
    """Rebuild an orbit basis by applying a recorded word log to a new seed."""
    m = rep.dim
    D = m * m
    nrm = np.linalg.norm(seed)
    if nrm < tol.rank_tol:
        raise ValueError("replay seed is numerically zero")
    B = np.empty((D, 1 + len(words)), dtype=complex)
    B[:, 0] = seed / nrm
    for k, (parent, op) in enumerate(words, start=1):
        cand = apply_pair(lows[op], B[:, parent])
        cand = cand / np.linalg.norm(cand)
        cur = B[:, :k]
        for _ in range(2):
            cand = cand - cur @ (np.conj(cur).T @ cand)
        nrm = np.linalg.norm(cand)
        if nrm < tol.rank_tol:
            raise RuntimeError("isometry replay degenerated: dependent word image")
        B[:, k] = cand / nrm
    return B


def _measure(
    rep: AdjointRep, B: np.ndarray, tol: Tolerance, omega_dense: np.ndarray
) -> tuple[float, int]:
    """Measured Casimir eigenvalue and exchange parity of an orbit basis."""
    m = rep.dim
    omega_b = omega_dense @ B
    ev = np.vdot(B[:, 0], omega_b[:, 0])
    res = max_abs(np.linalg.norm(omega_b - ev * B, axis=0))
    if abs(ev.imag) > tol.abs_tol * m or res > tol.abs_tol * m:
        raise AssertionError(
            f"orbit basis is not a Casimir eigenspace (ev={ev}, residual={res:.3e})"
        )
    swapped = apply_swap(B, m)
    par = np.vdot(B[:, 0], swapped[:, 0]).real
    parity = 1 if par > 0 else -1
    if max_abs(swapped - parity * B) > tol.abs_tol * m:
        raise AssertionError("orbit basis has indefinite exchange parity")
    return float(ev.real), parity


def generate_submodule(
    rep: AdjointRep,
    hwv,
    parity: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
    label: str | None = None,
    role: str | None = None,
    _lows: np.ndarray | None = None,
    _omega: np.ndarray | None = None,
) -> Submodule:
    """Generate the irreducible submodule spanned by the lowering orbit of ``hwv``.

    ``hwv`` may be a :class:`HighestWeight` or a raw coordinate vector plus
    explicit ``parity``.  The measured Casimir eigenvalue and exchange parity
    are validated on every basis vector; a stated parity must match.
    """
    if isinstance(hwv, HighestWeight):
        coords = hwv.coords
        parity = hwv.parity if parity is None else parity
        label = hwv.label if label is None else label
        role = hwv.role if role is None else role
    else:
        coords = np.asarray(hwv, dtype=complex)
    lows = lowering_ops(rep) if _lows is None else _lows
    omega = casimir_op(rep) if _omega is None else _omega
    B, _ = _orbit(rep, coords, tol, lows)
    omega_ev, measured_parity = _measure(rep, B, tol, omega)
    if parity is not None and measured_parity != parity:
        raise AssertionError(f"measured parity {measured_parity} != stated parity {parity}")
    return Submodule(
        label=label or "",
        role=role or "",
        hw_vector=coords,
        basis=B,
        omega_eigenvalue=omega_ev,
        exchange_parity=measured_parity,
    )


def build_decomposition(rep: AdjointRep, tol: Tolerance = DEFAULT_TOL) -> Decomposition:
    """Decompose adjoint (x) adjoint into submodules with the s->a isometry.

    The two adjoint copies are generated with the identical lowering-word
    sequence and orthonormalization order, which makes column-to-column
    mapping of their bases an equivariant partial isometry; the phase
    convention is iso(v_s) = +(norm ratio) v_a.  Completeness and mutual
    orthogonality of the projectors are verified before returning.
    """
    basis = rep.basis
    m = rep.dim
    D = m * m
    rows = highest_weight_vectors(basis, tol)
    lows = lowering_ops(rep)
    omega = casimir_op(rep)
    submodules: list[Submodule] = []
    sym_words = None
    sym_B = None
    for row in rows:
        if row.role == "adjoint_sym":
            sym_B, sym_words = _orbit(rep, row.coords, tol, lows)
            omega_ev, measured = _measure(rep, sym_B, tol, omega)
            if measured != row.parity:
                raise AssertionError("adjoint_sym parity mismatch")
            submodules.append(
                Submodule(row.label, row.role, row.coords, sym_B, omega_ev, measured)
            )
        elif row.role == "adjoint_anti":
            if sym_words is None:
                raise AssertionError("adjoint_sym must precede adjoint_anti")
            B = _replay(rep, row.coords, sym_words, tol, lows)
            omega_ev, measured = _measure(rep, B, tol, omega)
            if measured != row.parity:
                raise AssertionError("adjoint_anti parity mismatch")
            submodules.append(Submodule(row.label, row.role, row.coords, B, omega_ev, measured))
        else:
            submodules.append(generate_submodule(rep, row, tol=tol, _lows=lows, _omega=omega))

    dims = sum(sub.dim for sub in submodules)
    if dims != D:
        raise AssertionError(f"submodule dimensions sum to {dims}, expected {D}")
    stacked = np.hstack([sub.basis for sub in submodules])
    gram_res = max_abs(np.conj(stacked).T @ stacked - np.eye(D))
    if gram_res > tol.abs_tol * m:
        raise AssertionError(f"projector completeness residual {gram_res:.3e}")

    sym = next(s for s in submodules if s.role == "adjoint_sym")
    anti = next(s for s in submodules if s.role == "adjoint_anti")
    iso = anti.basis @ np.conj(sym.basis).T
    # phase check: iso maps the symmetric hwv onto a positive multiple of the antisymmetric one
    v_s = sym.hw_vector
    v_a = anti.hw_vector
    overlap = np.vdot(v_a / np.linalg.norm(v_a), iso @ (v_s / np.linalg.norm(v_s)))
    if not (abs(overlap - 1.0) <= 1e-6):
        raise AssertionError(f"isometry phase convention violated (overlap {overlap})")

    return Decomposition(n=basis.n, rep=rep, submodules=submodules, iso_s_to_a=iso)
