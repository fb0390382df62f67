"""Sparse complex operators over a Fock basis.

Thin wrapper around scipy CSR matrices carrying a hermiticity flag and a
fermion-parity grade, plus constructors for ladder, number, and bilinear
transfer operators and the graded commutator. Entries below a relative drop
tolerance are eliminated after every product so chained commutators do not
accumulate numerical fill-in.
"""

from __future__ import annotations

import json

import numpy as np
import scipy.sparse as sparse

from .fock import BOSON, FERMION, FockBasis

EVEN = 0
ODD = 1

DROP_TOL = 1e-14


def _drop_small(mat: sparse.csr_matrix) -> sparse.csr_matrix:
    mat = mat.tocsr()
    mat.eliminate_zeros()
    if mat.nnz:
        cut = DROP_TOL * np.max(np.abs(mat.data))
        if cut > 0:
            mat.data[np.abs(mat.data) < cut] = 0
            mat.eliminate_zeros()
    mat.sort_indices()
    return mat


class SparseOperator:
    """Complex sparse matrix with hermiticity flag and even/odd grade.

    `rational_diagonal` (optional) carries exact diagonal eigenvalues for
    operators used as lattice coordinates; it is preserved by nothing except
    explicit construction.
    """

    __slots__ = ("mat", "hermitian", "grade", "rational_diagonal")

    def __init__(self, mat, hermitian=False, grade=EVEN, rational_diagonal=None):
        if not sparse.issparse(mat):
            mat = sparse.csr_matrix(np.asarray(mat, dtype=complex))
        self.mat = _drop_small(mat.astype(complex))
        if self.mat.shape[0] != self.mat.shape[1]:
            raise ValueError("operators must be square")
        self.hermitian = bool(hermitian)
        if grade not in (EVEN, ODD):
            raise ValueError("grade must be EVEN (0) or ODD (1)")
        self.grade = grade
        self.rational_diagonal = (
            None if rational_diagonal is None else tuple(rational_diagonal)
        )

    # -- basic structure -------------------------------------------------

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @property
    def nnz(self) -> int:
        return self.mat.nnz

    def dagger(self) -> "SparseOperator":
        return SparseOperator(
            self.mat.conj().T.tocsr(), hermitian=self.hermitian, grade=self.grade
        )

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()

    def diagonal(self) -> np.ndarray:
        return self.mat.diagonal()

    def restricted(self, indices) -> np.ndarray:
        """Dense sub-block over the given basis indices (rows and columns)."""
        indices = np.asarray(indices)
        return self.mat.toarray()[np.ix_(indices, indices)]

    def max_norm(self) -> float:
        return float(np.max(np.abs(self.mat.data))) if self.mat.nnz else 0.0

    def fro_norm(self) -> float:
        return float(np.linalg.norm(self.mat.data)) if self.mat.nnz else 0.0

    def hermiticity_defect(self) -> float:
        """max-norm of A - A^dagger."""
        d = self.mat - self.mat.conj().T
        return float(np.max(np.abs(d.data))) if d.nnz else 0.0

    def is_diagonal(self, rel_tol=1e-12) -> bool:
        off = self.mat - sparse.diags(self.mat.diagonal())
        if off.nnz == 0:
            return True
        return float(np.max(np.abs(off.data))) <= rel_tol * max(self.max_norm(), 1.0)

    # -- algebra ----------------------------------------------------------

    def __add__(self, other):
        return SparseOperator(
            self.mat + other.mat,
            hermitian=self.hermitian and other.hermitian,
            grade=self.grade if self.grade == other.grade else EVEN,
        )

    def __sub__(self, other):
        return SparseOperator(
            self.mat - other.mat,
            hermitian=self.hermitian and other.hermitian,
            grade=self.grade if self.grade == other.grade else EVEN,
        )

    def __mul__(self, scalar):
        scalar = complex(scalar)
        return SparseOperator(
            self.mat * scalar,
            hermitian=self.hermitian and scalar.imag == 0.0,
            grade=self.grade,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def __matmul__(self, other):
        return SparseOperator(
            self.mat @ other.mat, hermitian=False, grade=self.grade ^ other.grade
        )

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Exact sparse matrix-vector product."""
        vec = np.asarray(vec)
        if vec.shape[0] != self.dim:
            raise ValueError(
                f"vector length {vec.shape[0]} does not match operator dim {self.dim}"
            )
        return self.mat @ vec

    def expectation(self, vec: np.ndarray) -> complex:
        return complex(np.vdot(vec, self.apply(vec)))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        """Triplet-list form with entries sorted by (row, col)."""
        coo = self.mat.tocoo()
        order = np.lexsort((coo.col, coo.row))
        entries = [
            [int(coo.row[k]), int(coo.col[k]), float(coo.data[k].real), float(coo.data[k].imag)]
            for k in order
        ]
        return json.dumps(
            {
                "dim": self.dim,
                "hermitian": self.hermitian,
                "grade": "odd" if self.grade == ODD else "even",
                "entries": entries,
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "SparseOperator":
        payload = json.loads(text)
        dim = int(payload["dim"])
        entries = payload["entries"]
        rows = [e[0] for e in entries]
        cols = [e[1] for e in entries]
        vals = [complex(e[2], e[3]) for e in entries]
        mat = sparse.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
        return cls(
            mat,
            hermitian=bool(payload.get("hermitian", False)),
            grade=ODD if payload.get("grade") == "odd" else EVEN,
        )

    def __repr__(self):
        g = "odd" if self.grade == ODD else "even"
        return f"SparseOperator(dim={self.dim}, nnz={self.nnz}, hermitian={self.hermitian}, grade={g})"


# -- constructors ----------------------------------------------------------


def identity(dim_or_basis) -> SparseOperator:
    dim = dim_or_basis.dim if isinstance(dim_or_basis, FockBasis) else int(dim_or_basis)
    return SparseOperator(sparse.identity(dim, dtype=complex, format="csr"), hermitian=True)


def zero(dim_or_basis) -> SparseOperator:
    dim = dim_or_basis.dim if isinstance(dim_or_basis, FockBasis) else int(dim_or_basis)
    return SparseOperator(sparse.csr_matrix((dim, dim), dtype=complex), hermitian=True)


def diagonal_op(values, hermitian=None, rational=None) -> SparseOperator:
    values = np.asarray(values, dtype=complex)
    if hermitian is None:
        hermitian = bool(np.max(np.abs(values.imag), initial=0.0) == 0.0)
    return SparseOperator(
        sparse.diags(values, format="csr"), hermitian=hermitian, rational_diagonal=rational
    )


def _jw_sign(state, mode, order):
    """(-1)^(occupied fermion modes preceding `mode` in `order`)."""
    count = 0
    for m in order:
        if m == mode:
            break
        count += state[m]
    return -1.0 if count % 2 else 1.0


def ladder_ops(basis: FockBasis, mode: int, jw_order=None):
    """(lower, raise) pair for one mode of an unconstrained basis.

    Bosons: <n-1|a|n> = sqrt(n). Fermions: Jordan-Wigner signs over the
    declared ordering, which defaults to the basis mode-list order. Spin:
    <S,m-1|S-|S,m> = sqrt(S(S+1) - m(m-1)). The raising operator is the
    exact structural conjugate transpose of the lowering one.
    """
    if basis.constraint is not None:
        raise ValueError(
            "single-mode ladder operators change the conserved total; "
            "build bilinears with transfer_op on a constrained basis"
        )
    if not 0 <= mode < len(basis.modes):
        raise ValueError(f"mode index {mode} out of range")
    spec = basis.modes[mode]

    if spec.kind == FERMION:
        fermion_modes = [i for i, m in enumerate(basis.modes) if m.kind == FERMION]
        if jw_order is None:
            order = fermion_modes
        else:
            order = list(jw_order)
            if sorted(order) != fermion_modes:
                raise ValueError(
                    "Jordan-Wigner ordering must list every fermion mode exactly once; "
                    f"got {order}, fermion modes are {fermion_modes}"
                )
    else:
        order = None

    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        n = state[mode]
        if n == 0:
            continue
        target = list(state)
        target[mode] = n - 1
        row = basis.index_of(target)
        if spec.kind == BOSON:
            amp = np.sqrt(n)
        elif spec.kind == FERMION:
            amp = _jw_sign(state, mode, order)
        else:  # spin: level n corresponds to m = n - S
            s = float(spec.spin_s)
            m = n - s
            amp = np.sqrt(s * (s + 1) - m * (m - 1))
        rows.append(row)
        cols.append(col)
        vals.append(amp)

    lower_mat = sparse.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(basis.dim, basis.dim)
    )
    grade = ODD if spec.kind == FERMION else EVEN
    lower = SparseOperator(lower_mat, hermitian=False, grade=grade)
    return lower, lower.dagger()


def number_op(basis: FockBasis, mode: int) -> SparseOperator:
    """Occupation-number operator of one mode (diagonal, exact)."""
    occ = basis.occupations_of_mode(mode)
    return diagonal_op(occ.astype(float), hermitian=True, rational=[int(n) for n in occ])


def transfer_op(basis: FockBasis, to_mode: int, from_mode: int) -> SparseOperator:
    """Bosonic bilinear a_to^dagger a_from, valid on constrained sectors.

    Built directly from matrix elements sqrt((n_to + 1) n_from) so that no
    intermediate state ever leaves the sector.
    """
    for m in (to_mode, from_mode):
        if basis.modes[m].kind != BOSON:
            raise ValueError("transfer_op is defined for boson modes")
    if to_mode == from_mode:
        return number_op(basis, to_mode)
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        if state[from_mode] == 0:
            continue
        if state[to_mode] >= basis.modes[to_mode].capacity:
            continue
        target = list(state)
        target[from_mode] -= 1
        target[to_mode] += 1
        if not basis.contains(target):
            continue
        rows.append(basis.index_of(target))
        cols.append(col)
        vals.append(np.sqrt((state[to_mode] + 1) * state[from_mode]))
    mat = sparse.csr_matrix(
        (np.asarray(vals, dtype=complex), (rows, cols)), shape=(basis.dim, basis.dim)
    )
    return SparseOperator(mat, hermitian=False, grade=EVEN)


def graded_commutator(a: SparseOperator, b: SparseOperator) -> SparseOperator:
    """[a, b] for any pair except odd-odd, where it is the anticommutator.

    The result grade is the XOR of the input grades.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.grade == ODD and b.grade == ODD:
        mat = a.mat @ b.mat + b.mat @ a.mat
    else:
        mat = a.mat @ b.mat - b.mat @ a.mat
    return SparseOperator(mat, hermitian=False, grade=a.grade ^ b.grade)


def apply(a: SparseOperator, vec: np.ndarray) -> np.ndarray:
    return a.apply(vec)


def frobenius_inner(a: SparseOperator, b: SparseOperator) -> complex:
    """trace(a^dagger b)."""
    return complex(a.mat.conj().multiply(b.mat).sum())


def linear_combination(ops, coeffs) -> SparseOperator:
    """sum_k coeffs[k] * ops[k]; hermiticity is re-checked numerically."""
    if len(ops) != len(coeffs) or not ops:
        raise ValueError("need equally many operators and coefficients, at least one")
    acc = ops[0].mat * complex(coeffs[0])
    for op, c in zip(ops[1:], coeffs[1:]):
        acc = acc + op.mat * complex(c)
    out = SparseOperator(acc, hermitian=False, grade=ops[0].grade)
    scale = max(out.max_norm(), 1.0)
    out.hermitian = out.hermiticity_defect() <= 1e-12 * scale
    return out
