"""Catalog of operator algebras in concrete boson/fermion/spin representations,
plus numerical structure-constant extraction, (super-)closure detection,
Casimir verification, and reference-state search.

Every catalog entry realizes its generators over an explicit FockBasis and
classifies them into mutually commuting diagonal (Cartan) generators and
raising/lowering pairs carrying a root vector. Root vectors are stored as
exact rationals in per-Cartan eigenvalue units (`cartan_units` holds the
possibly irrational unit, e.g. 1/sqrt(3)).

Representations on truncated bases break the algebraic identities in the
outermost cutoff levels; identity checks therefore run on an interior block
that excludes a configurable window (default 2) of boundary states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.linalg

from .errors import DegenerateGeneratorsError
from .fock import FockBasis, boson, fermion, spin
from .operators import (
    EVEN,
    ODD,
    SparseOperator,
    diagonal_op,
    graded_commutator,
    identity,
    ladder_ops,
    number_op,
    transfer_op,
)

DEFAULT_BOUNDARY_WINDOW = 2


@dataclass(frozen=True)
class RootPair:
    """Indices (into the generator list) of a raising/lowering pair and the
    root vector of the raising generator, in Cartan-eigenvalue units."""

    raising: int
    lowering: int
    root: tuple


@dataclass
class AlgebraModel:
    name: str
    params: dict
    basis: FockBasis
    labels: list
    generators: list
    cartan: list
    root_pairs: list
    cartan_units: tuple
    graded: bool = False
    annihilators: list = field(default_factory=list)
    casimirs: dict = field(default_factory=dict)
    truncated_modes: tuple = ()
    two_sided_modes: tuple = ()

    @property
    def dim(self) -> int:
        return len(self.generators)

    def generator(self, label) -> SparseOperator:
        return self.generators[self.labels.index(label)]

    def interior(self, window=DEFAULT_BOUNDARY_WINDOW) -> np.ndarray:
        """Mask of basis states unaffected by basis truncation."""
        return self.basis.interior_mask(
            window=window,
            truncated_modes=self.truncated_modes,
            two_sided_modes=self.two_sided_modes,
        )

    def cartan_ops(self):
        return [self.generators[i] for i in self.cartan]

    def root_float(self, pair: RootPair) -> np.ndarray:
        """Root vector in physical (float) Cartan eigenvalues."""
        return np.array(
            [u * float(r) for u, r in zip(self.cartan_units, pair.root)]
        )


@dataclass
class StructureConstants:
    """Raw bracket coefficients c with [X_a, X_b} = sum_c coeffs[a,b,c] X_c.

    `f` rescales to the convention [X_a, X_b] = i f_ab^c X_c. `residuals`
    holds the per-pair relative norm of the part of the bracket outside the
    generator span; `closed` is true when the largest residual is below 1e-10.
    """

    labels: list
    coeffs: np.ndarray
    residuals: np.ndarray
    closed: bool

    @property
    def f(self) -> np.ndarray:
        return self.coeffs / 1j

    def coefficient(self, a, b, c) -> complex:
        ia, ib, ic = (self.labels.index(x) for x in (a, b, c))
        return complex(self.coeffs[ia, ib, ic])


@dataclass
class ClosureReport:
    iterations: list
    closed: bool
    dimension: int
    cap: int
    added_labels: list
    max_residual: float

    @property
    def final(self) -> str:
        return f"closed at dim {self.dimension}" if self.closed else "exceeded cap"


# ---------------------------------------------------------------------------
# closure and structure constants
# ---------------------------------------------------------------------------

CLOSURE_TOL = 1e-10


class _Span:
    """Orthonormal span of operators under the interior trace inner product."""

    def __init__(self, interior_idx):
        self.idx = interior_idx
        self.q = []  # orthonormal flattened blocks

    def _vec(self, op: SparseOperator) -> np.ndarray:
        return op.restricted(self.idx).ravel()

    def residual(self, op):
        v = self._vec(op)
        r = v.copy()
        for q in self.q:
            r -= np.vdot(q, r) * q
        for q in self.q:  # second pass guards against cancellation
            r -= np.vdot(q, r) * q
        return v, r

    def try_add(self, op, scale, tol=CLOSURE_TOL):
        v, r = self.residual(op)
        norm_v = np.linalg.norm(v)
        if norm_v <= tol * scale:
            return False
        rn = np.linalg.norm(r)
        if rn > tol * max(norm_v, scale):
            self.q.append(r / rn)
            return True
        return False

    def __len__(self):
        return len(self.q)


def lie_closure(
    seed,
    cap,
    graded=False,
    interior=None,
    labels=None,
    tol=CLOSURE_TOL,
) -> ClosureReport:
    """Repeatedly bracket all pairs, adding independent directions until a
    fixed point or until the span exceeds `cap`.

    When `graded`, odd-odd pairs use the anticommutator. `interior` is a
    boolean mask restricting the inner product to truncation-safe states.
    """
    seed = list(seed)
    if cap < len(seed):
        raise ValueError(f"cap {cap} is smaller than the seed size {len(seed)}")
    dim = seed[0].dim
    mask = np.ones(dim, dtype=bool) if interior is None else np.asarray(interior, bool)
    idx = np.where(mask)[0]
    if labels is None:
        labels = [f"g{i}" for i in range(len(seed))]

    span = _Span(idx)
    ops, names = [], []
    for op, lab in zip(seed, labels):
        if span.try_add(op, scale=np.linalg.norm(op.restricted(idx)), tol=tol):
            ops.append(op)
            names.append(lab)
    added = []
    dims = [len(span)]
    norms = [np.linalg.norm(op.restricted(idx)) for op in ops]

    while True:
        grew = False
        k = len(ops)
        for i in range(k):
            for j in range(i + 1, k):
                br = graded_commutator(ops[i], ops[j]) if graded else _plain_comm(ops[i], ops[j])
                scale = norms[i] * norms[j]
                if span.try_add(br, scale=scale, tol=tol):
                    both_odd = graded and ops[i].grade == ODD and ops[j].grade == ODD
                    sym = "{%s,%s}" if both_odd else "[%s,%s]"
                    ops.append(br)
                    names.append(sym % (names[i], names[j]))
                    norms.append(np.linalg.norm(br.restricted(idx)))
                    added.append(names[-1])
                    grew = True
                    if len(span) > cap:
                        dims.append(len(span))
                        return ClosureReport(dims, False, len(span), cap, added, np.nan)
        dims.append(len(span))
        if not grew:
            break

    sc = extract_structure_constants(ops, graded=graded, interior=mask, labels=names)
    return ClosureReport(dims, True, len(span), cap, added, float(np.max(sc.residuals)))


def _plain_comm(a, b):
    out = SparseOperator(a.mat @ b.mat - b.mat @ a.mat, grade=a.grade ^ b.grade)
    return out


def extract_structure_constants(
    gens, graded=False, interior=None, labels=None
) -> StructureConstants:
    """Least-squares projection of every pairwise (graded) bracket onto the
    generator span under the interior trace inner product."""
    gens = list(gens)
    if len(gens) < 2:
        raise ValueError("need at least two generators")
    dim = gens[0].dim
    mask = np.ones(dim, dtype=bool) if interior is None else np.asarray(interior, bool)
    idx = np.where(mask)[0]
    if labels is None:
        labels = [f"g{i}" for i in range(len(gens))]

    vecs = np.stack([g.restricted(idx).ravel() for g in gens])
    gram = vecs.conj() @ vecs.T
    sv = np.linalg.svd(gram, compute_uv=False)
    if sv[-1] <= 0 or sv[0] / sv[-1] > 1e12:
        _, _, vh = np.linalg.svd(gram)
        weights = np.abs(vh[-1])
        suspects = [labels[i] for i in np.where(weights > 0.3)[0]]
        raise DegenerateGeneratorsError(suspects or labels)
    gram_pinv = np.linalg.pinv(gram, rcond=1e-12)

    n = len(gens)
    coeffs = np.zeros((n, n, n), dtype=complex)
    residuals = np.zeros((n, n))
    norms = np.linalg.norm(vecs, axis=1)
    for a in range(n):
        for b in range(a + 1, n):
            br = (
                graded_commutator(gens[a], gens[b])
                if graded
                else _plain_comm(gens[a], gens[b])
            )
            v = br.restricted(idx).ravel()
            nv = np.linalg.norm(v)
            noise = 1e-13 * norms[a] * norms[b]
            if nv <= noise:
                continue
            lam = gram_pinv @ (vecs.conj() @ v)
            left = v - vecs.T @ lam
            coeffs[a, b] = lam
            residuals[a, b] = np.linalg.norm(left) / nv
            both_odd = graded and gens[a].grade == ODD and gens[b].grade == ODD
            sign = 1.0 if both_odd else -1.0
            coeffs[b, a] = sign * lam
            residuals[b, a] = residuals[a, b]
    return StructureConstants(
        labels, coeffs, residuals, bool(np.max(residuals) < 1e-10)
    )


def verify_casimir(op: SparseOperator, model: AlgebraModel, window=DEFAULT_BOUNDARY_WINDOW) -> float:
    """max over generators of ||[op, X]|| / (||op|| ||X||) on the interior block."""
    idx = np.where(model.interior(window))[0]
    op_block = op.restricted(idx)
    op_norm = np.linalg.norm(op_block)
    worst = 0.0
    for g in model.generators:
        comm = _plain_comm(op, g)
        g_norm = np.linalg.norm(g.restricted(idx))
        if op_norm == 0 or g_norm == 0:
            continue
        worst = max(worst, np.linalg.norm(comm.restricted(idx)) / (op_norm * g_norm))
    return float(worst)


def find_reference_states(
    model: AlgebraModel, window=DEFAULT_BOUNDARY_WINDOW, boundary_tol=1e-8
) -> list:
    """Orthonormal basis of the joint kernel of the model's annihilator set.

    Kernel vectors supported on the truncation boundary are artifacts of the
    cutoff and are discarded; an empty list is a legitimate result (the
    translationally invariant chain has no reference state).
    """
    if not model.annihilators:
        return []
    stacked = np.vstack([model.generators[i].toarray() for i in model.annihilators])
    null = scipy.linalg.null_space(stacked, rcond=1e-10)
    if null.size == 0:
        return []
    outside = ~model.interior(window)
    kept = []
    for k in range(null.shape[1]):
        v = null[:, k]
        if np.sum(np.abs(v[outside]) ** 2) < boundary_tol:
            kept.append(v)
    if not kept:
        return []
    q, _ = np.linalg.qr(np.stack(kept, axis=1))
    return [q[:, k] for k in range(q.shape[1])]


def verify_model(model: AlgebraModel, window=DEFAULT_BOUNDARY_WINDOW, closure_cap=None) -> dict:
    """Self-check report: Cartan diagonality/commutativity, root eigen-relations,
    closure of the generator set, and Casimir residuals."""
    idx = np.where(model.interior(window))[0]
    scale = max(
        (np.linalg.norm(g.restricted(idx)) for g in model.generators), default=1.0
    )

    cartan_ok = True
    for ci in model.cartan:
        if not model.generators[ci].is_diagonal():
            cartan_ok = False
    for i, ci in enumerate(model.cartan):
        for cj in model.cartan[i + 1 :]:
            comm = _plain_comm(model.generators[ci], model.generators[cj])
            if np.linalg.norm(comm.restricted(idx)) > 1e-12 * scale**2:
                cartan_ok = False

    root_ok = True
    root_worst = 0.0
    for pair in model.root_pairs:
        e = model.generators[pair.raising]
        alpha = model.root_float(pair)
        for a, ci in enumerate(model.cartan):
            comm = _plain_comm(model.generators[ci], e)
            diff = comm.mat - alpha[a] * e.mat
            block = SparseOperator(diff).restricted(idx)
            enorm = np.linalg.norm(e.restricted(idx))
            rel = np.linalg.norm(block) / max(enorm, 1e-300)
            root_worst = max(root_worst, rel)
            if rel > 1e-10 * max(1.0, np.linalg.norm(model.generators[ci].restricted(idx))):
                root_ok = False

    cap = closure_cap if closure_cap is not None else 4 * model.dim + 8
    report = lie_closure(
        model.generators,
        cap=cap,
        graded=model.graded,
        interior=model.interior(window),
        labels=list(model.labels),
    )
    casimirs = {
        label: verify_casimir(op, model, window) for label, op in model.casimirs.items()
    }
    return {
        "cartan_ok": bool(cartan_ok),
        "root_eigen_ok": bool(root_ok),
        "root_worst_rel": float(root_worst),
        "closure": {
            "dim": report.dimension,
            "closed": report.closed,
            "residual": None if not report.closed else report.max_residual,
        },
        "casimirs": [{"label": k, "residual": v} for k, v in casimirs.items()],
    }


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _e2(L=21):
    """Shift algebra of a finite chain: position operator plus unit shifts.

    The chain truncates an infinite lattice at both ends, so identity checks
    exclude a window at both boundaries.
    """
    L = int(L)
    if L < 5:
        raise ValueError("chain length must be at least 5")
    basis = FockBasis([boson(L - 1)])
    offset = (L - 1) // 2
    sites = np.arange(L) - offset
    e0 = diagonal_op(sites.astype(float), hermitian=True, rational=[int(s) for s in sites])
    rows = np.arange(1, L)
    cols = np.arange(0, L - 1)
    import scipy.sparse as sp

    ep = SparseOperator(
        sp.csr_matrix((np.ones(L - 1, dtype=complex), (rows, cols)), shape=(L, L))
    )
    em = ep.dagger()
    casimir = SparseOperator(ep.mat @ em.mat, hermitian=True)
    return AlgebraModel(
        name="e2",
        params={"L": L},
        basis=basis,
        labels=["E0", "E+", "E-"],
        generators=[e0, ep, em],
        cartan=[0],
        root_pairs=[RootPair(1, 2, (_frac(1),))],
        cartan_units=(1.0,),
        annihilators=[1],
        casimirs={"shift_product": casimir},
        truncated_modes=(),
        two_sided_modes=(0,),
    )


def _hw(cutoff=20):
    """Single bosonic mode: ladder pair, number operator, identity."""
    basis = FockBasis([boson(int(cutoff))])
    a, adag = ladder_ops(basis, 0)
    n = number_op(basis, 0)
    one = identity(basis)
    return AlgebraModel(
        name="hw",
        params={"cutoff": int(cutoff)},
        basis=basis,
        labels=["a", "adag", "n", "I"],
        generators=[a, adag, n, one],
        cartan=[2],
        root_pairs=[RootPair(1, 0, (_frac(1),))],
        cartan_units=(1.0,),
        annihilators=[0],
        casimirs={"identity": one},
        truncated_modes=(0,),
    )


def _su2_spin(S=1):
    """Spin-S angular momentum triple on a single spin mode."""
    spec = spin(S)
    basis = FockBasis([spec])
    sm, sp_ = ladder_ops(basis, 0)
    s = spec.spin_s
    m_exact = [Fraction(level) - s for level in range(spec.levels)]
    sz = diagonal_op([float(m) for m in m_exact], hermitian=True, rational=m_exact)
    s2 = SparseOperator(
        sz.mat @ sz.mat + 0.5 * (sp_.mat @ sm.mat + sm.mat @ sp_.mat), hermitian=True
    )
    return AlgebraModel(
        name="su2_spin",
        params={"S": s},
        basis=basis,
        labels=["Sz", "S+", "S-"],
        generators=[sz, sp_, sm],
        cartan=[0],
        root_pairs=[RootPair(1, 2, (_frac(1),))],
        cartan_units=(1.0,),
        annihilators=[1],
        casimirs={"S2": s2},
    )


def _su2_schwinger(N=4):
    """Two-boson realization of the spin algebra on the fixed-N sector."""
    N = int(N)
    basis = FockBasis([boson(N), boson(N)], constraint=N)
    na = basis.occupations_of_mode(0)
    nb = basis.occupations_of_mode(1)
    sz_exact = [Fraction(int(x) - int(y), 2) for x, y in zip(na, nb)]
    sz = diagonal_op([float(v) for v in sz_exact], hermitian=True, rational=sz_exact)
    sp_ = transfer_op(basis, 0, 1)
    sm = sp_.dagger()
    ntot = diagonal_op((na + nb).astype(float), hermitian=True, rational=[int(v) for v in na + nb])
    s2 = SparseOperator(
        sz.mat @ sz.mat + 0.5 * (sp_.mat @ sm.mat + sm.mat @ sp_.mat), hermitian=True
    )
    return AlgebraModel(
        name="su2_schwinger",
        params={"N": N},
        basis=basis,
        labels=["Sz", "S+", "S-"],
        generators=[sz, sp_, sm],
        cartan=[0],
        root_pairs=[RootPair(1, 2, (_frac(1),))],
        cartan_units=(1.0,),
        annihilators=[1],
        casimirs={"total_number": ntot, "S2": s2},
    )


def _su3_schwinger(N=3):
    """Three-boson realization with two diagonal generators and three
    raising/lowering pairs; the fixed-N sector is a triangular lattice."""
    N = int(N)
    basis = FockBasis([boson(N)] * 3, constraint=N)
    na = basis.occupations_of_mode(0)
    nb = basis.occupations_of_mode(1)
    nc = basis.occupations_of_mode(2)
    h1_exact = [Fraction(int(x) - int(y), 2) for x, y in zip(na, nb)]
    h2_exact = [Fraction(int(x) + int(y) - 2 * int(z), 2) for x, y, z in zip(na, nb, nc)]
    h1 = diagonal_op([float(v) for v in h1_exact], hermitian=True, rational=h1_exact)
    h2 = diagonal_op(
        [float(v) / np.sqrt(3.0) for v in h2_exact], hermitian=True, rational=h2_exact
    )
    ip = transfer_op(basis, 0, 1)
    up = transfer_op(basis, 1, 2)
    vp = transfer_op(basis, 0, 2)
    gens = [h1, h2, ip, ip.dagger(), up, up.dagger(), vp, vp.dagger()]
    labels = ["H1", "H2", "I+", "I-", "U+", "U-", "V+", "V-"]
    ntot = diagonal_op((na + nb + nc).astype(float), hermitian=True)
    quad = None
    acc = h1.mat @ h1.mat * 0
    for raising, lowering in ((ip, ip.dagger()), (up, up.dagger()), (vp, vp.dagger())):
        acc = acc + 0.5 * (raising.mat @ lowering.mat + lowering.mat @ raising.mat)
    h2s = h2.mat @ h2.mat
    quad = SparseOperator(h1.mat @ h1.mat + h2s + acc, hermitian=True)
    return AlgebraModel(
        name="su3_schwinger",
        params={"N": N},
        basis=basis,
        labels=labels,
        generators=gens,
        cartan=[0, 1],
        root_pairs=[
            RootPair(2, 3, (_frac(1), _frac(0))),
            RootPair(4, 5, (Fraction(-1, 2), Fraction(3, 2))),
            RootPair(6, 7, (Fraction(1, 2), Fraction(3, 2))),
        ],
        cartan_units=(1.0, 1.0 / np.sqrt(3.0)),
        annihilators=[2, 4, 6],
        casimirs={"total_number": ntot, "quadratic": quad},
    )


def _so5_quoted(N=2):
    """Four-boson, fixed-N representation with the commonly quoted ten-element
    generator list (two diagonal, four raising/lowering pairs). The quoted
    set is not closed under commutation; closure and site-count diagnostics
    report whatever they find."""
    N = int(N)
    basis = FockBasis([boson(N)] * 4, constraint=N)
    n_au = basis.occupations_of_mode(0)
    n_ad = basis.occupations_of_mode(1)
    n_bu = basis.occupations_of_mode(2)
    n_bd = basis.occupations_of_mode(3)
    h1_exact = [Fraction(int(x) - int(y), 2) for x, y in zip(n_au, n_ad)]
    h2_exact = [Fraction(int(x) - int(y), 2) for x, y in zip(n_bu, n_bd)]
    h1 = diagonal_op([float(v) for v in h1_exact], hermitian=True, rational=h1_exact)
    h2 = diagonal_op([float(v) for v in h2_exact], hermitian=True, rational=h2_exact)
    sa = transfer_op(basis, 0, 1)   # a-spin flip up
    sb = transfer_op(basis, 2, 3)   # b-spin flip up
    sab = transfer_op(basis, 0, 3)  # cross flip along (1/2, 1/2)
    sba = transfer_op(basis, 1, 2)  # cross flip along (-1/2, -1/2)
    gens = [h1, h2, sa, sa.dagger(), sb, sb.dagger(), sab, sab.dagger(), sba, sba.dagger()]
    labels = ["H1", "H2", "Sa+", "Sa-", "Sb+", "Sb-", "Sab+", "Sab-", "Sba+", "Sba-"]
    ntot = diagonal_op((n_au + n_ad + n_bu + n_bd).astype(float), hermitian=True)
    return AlgebraModel(
        name="so5_quoted",
        params={"N": N},
        basis=basis,
        labels=labels,
        generators=gens,
        cartan=[0, 1],
        root_pairs=[
            RootPair(2, 3, (_frac(1), _frac(0))),
            RootPair(4, 5, (_frac(0), _frac(1))),
            RootPair(6, 7, (Fraction(1, 2), Fraction(1, 2))),
            RootPair(8, 9, (Fraction(-1, 2), Fraction(-1, 2))),
        ],
        cartan_units=(1.0, 1.0),
        annihilators=[2, 4, 6, 8],
        casimirs={"total_number": ntot},
    )


def _su11_chain(k0_diag, kp: SparseOperator, name, params, basis, truncated):
    km = kp.dagger()
    k1 = SparseOperator(0.5 * (kp.mat + km.mat), hermitian=True)
    k2 = SparseOperator((kp.mat - km.mat) / 2j, hermitian=True)
    casimir = SparseOperator(
        k0_diag.mat @ k0_diag.mat - k1.mat @ k1.mat - k2.mat @ k2.mat, hermitian=True
    )
    return AlgebraModel(
        name=name,
        params=params,
        basis=basis,
        labels=["K0", "K+", "K-"],
        generators=[k0_diag, kp, km],
        cartan=[0],
        root_pairs=[RootPair(1, 2, (_frac(1),))],
        cartan_units=(1.0,),
        annihilators=[2],
        casimirs={"hyperbolic": casimir},
        truncated_modes=truncated,
    )


def _su11_single(k=Fraction(1, 4), cutoff=40):
    """Squeezing representation on a single mode: K+ = (a^dag)^2 / 2.

    k = 1/4 works on the even chain (reference |0>), k = 3/4 on the odd
    chain (reference |1>); the operators themselves live on the full basis.
    """
    k = _frac(k)
    if k not in (Fraction(1, 4), Fraction(3, 4)):
        raise ValueError("k must be 1/4 or 3/4 for the single-mode representation")
    basis = FockBasis([boson(int(cutoff))])
    a, adag = ladder_ops(basis, 0)
    n = np.arange(basis.dim)
    k0_exact = [Fraction(2 * int(v) + 1, 4) for v in n]
    k0 = diagonal_op([float(v) for v in k0_exact], hermitian=True, rational=k0_exact)
    kp = SparseOperator(adag.mat @ adag.mat * 0.5)
    return _su11_chain(
        k0, kp, "su11_single", {"k": k, "cutoff": int(cutoff)}, basis, (0,)
    )


def _su11_intensity(cutoff=40):
    """Intensity-dependent representation: K+ |n> = (n+1) |n+1>, k = 1/2."""
    basis = FockBasis([boson(int(cutoff))])
    n = np.arange(basis.dim)
    import scipy.sparse as sp

    vals = (n[:-1] + 1).astype(complex)
    kp = SparseOperator(
        sp.csr_matrix((vals, (n[1:], n[:-1])), shape=(basis.dim, basis.dim))
    )
    k0_exact = [Fraction(2 * int(v) + 1, 2) for v in n]
    k0 = diagonal_op([float(v) for v in k0_exact], hermitian=True, rational=k0_exact)
    return _su11_chain(
        k0, kp, "su11_intensity", {"k": Fraction(1, 2), "cutoff": int(cutoff)}, basis, (0,)
    )


def _su11_twomode(cutoff=20):
    """Two-mode squeezing representation: K+ = a^dag b^dag."""
    basis = FockBasis([boson(int(cutoff))] * 2)
    a, adag = ladder_ops(basis, 0)
    b, bdag = ladder_ops(basis, 1)
    kp = SparseOperator(adag.mat @ bdag.mat)
    na = basis.occupations_of_mode(0)
    nb = basis.occupations_of_mode(1)
    k0_exact = [Fraction(int(x) + int(y) + 1, 2) for x, y in zip(na, nb)]
    k0 = diagonal_op([float(v) for v in k0_exact], hermitian=True, rational=k0_exact)
    model = _su11_chain(
        k0, kp, "su11_twomode", {"cutoff": int(cutoff)}, basis, (0, 1)
    )
    imbalance = diagonal_op((na - nb).astype(float), hermitian=True)
    model.casimirs["imbalance"] = imbalance
    return model


def _sp2n_boson(modes=2, cutoff=6):
    """Quadratic bosonic algebra: hoppings, pair creators/annihilators, and
    half-shifted number operators, N(2N+1) generators in total."""
    m = int(modes)
    basis = FockBasis([boson(int(cutoff))] * m)
    low = [ladder_ops(basis, i)[0] for i in range(m)]
    raise_ = [op.dagger() for op in low]
    gens, labels = [], []
    cartan_idx = []
    diag_exact = []
    for i in range(m):
        occ = basis.occupations_of_mode(i)
        exact = [Fraction(2 * int(v) + 1, 2) for v in occ]
        gens.append(diagonal_op([float(v) for v in exact], hermitian=True, rational=exact))
        labels.append(f"D{i}")
        cartan_idx.append(i)
        diag_exact.append(exact)
    root_pairs = []
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            gens.append(SparseOperator(raise_[i].mat @ low[j].mat))
            labels.append(f"h{i}{j}")
    for i in range(m):
        for j in range(i, m):
            gens.append(SparseOperator(raise_[i].mat @ raise_[j].mat))
            labels.append(f"p{i}{j}+")
    for i in range(m):
        for j in range(i, m):
            gens.append(SparseOperator(low[i].mat @ low[j].mat))
            labels.append(f"p{i}{j}-")

    def root_of(create, destroy):
        r = [Fraction(0)] * m
        for c in create:
            r[c] += 1
        for d in destroy:
            r[d] -= 1
        return tuple(r)

    for i in range(m):
        for j in range(i + 1, m):
            root_pairs.append(
                RootPair(labels.index(f"h{i}{j}"), labels.index(f"h{j}{i}"), root_of([i], [j]))
            )
    for i in range(m):
        for j in range(i, m):
            root_pairs.append(
                RootPair(labels.index(f"p{i}{j}+"), labels.index(f"p{i}{j}-"), root_of([i, j], []))
            )
    annihilators = [labels.index(l) for l in labels if l.startswith("h")]
    annihilators += [labels.index(l) for l in labels if l.endswith("-") and l.startswith("p")]
    return AlgebraModel(
        name="sp2n_boson",
        params={"modes": m, "cutoff": int(cutoff)},
        basis=basis,
        labels=labels,
        generators=gens,
        cartan=cartan_idx,
        root_pairs=root_pairs,
        cartan_units=(1.0,) * m,
        annihilators=annihilators,
        casimirs={},
        truncated_modes=tuple(range(m)),
    )


def _so2n_fermion(modes=2):
    """Quadratic fermionic algebra on 2^N states: hoppings, pairings, and
    half-shifted number operators, N(2N-1) generators; all grades even."""
    m = int(modes)
    basis = FockBasis([fermion()] * m)
    low = [ladder_ops(basis, i)[0] for i in range(m)]
    raise_ = [op.dagger() for op in low]
    gens, labels, cartan_idx = [], [], []
    for i in range(m):
        occ = basis.occupations_of_mode(i)
        exact = [Fraction(2 * int(v) - 1, 2) for v in occ]
        gens.append(diagonal_op([float(v) for v in exact], hermitian=True, rational=exact))
        labels.append(f"D{i}")
        cartan_idx.append(i)
    for i in range(m):
        for j in range(m):
            if i != j:
                gens.append(SparseOperator(raise_[i].mat @ low[j].mat))
                labels.append(f"h{i}{j}")
    pair_raisers = {}
    for i in range(m):
        for j in range(i + 1, m):
            op = SparseOperator(raise_[i].mat @ raise_[j].mat)
            pair_raisers[(i, j)] = op
            gens.append(op)
            labels.append(f"p{i}{j}+")
    for i in range(m):
        for j in range(i + 1, m):
            gens.append(pair_raisers[(i, j)].dagger())  # = c_j c_i, sign included
            labels.append(f"p{i}{j}-")

    def root_of(create, destroy):
        r = [Fraction(0)] * m
        for c in create:
            r[c] += 1
        for d in destroy:
            r[d] -= 1
        return tuple(r)

    root_pairs = []
    for i in range(m):
        for j in range(i + 1, m):
            root_pairs.append(
                RootPair(labels.index(f"h{i}{j}"), labels.index(f"h{j}{i}"), root_of([i], [j]))
            )
            root_pairs.append(
                RootPair(labels.index(f"p{i}{j}+"), labels.index(f"p{i}{j}-"), root_of([i, j], []))
            )
    annihilators = [labels.index(l) for l in labels if l.startswith("h")]
    annihilators += [labels.index(l) for l in labels if l.endswith("-") and l.startswith("p")]
    return AlgebraModel(
        name="so2n_fermion",
        params={"modes": m},
        basis=basis,
        labels=labels,
        generators=gens,
        cartan=cartan_idx,
        root_pairs=root_pairs,
        cartan_units=(1.0,) * m,
        annihilators=annihilators,
        casimirs={},
    )


def _jc_super(cutoff=10):
    """Excitation-conserving boson-fermion superalgebra: two even number
    operators and an odd raising/lowering pair."""
    basis = FockBasis([boson(int(cutoff)), fermion()])
    a, adag = ladder_ops(basis, 0)
    c, cdag = ladder_ops(basis, 1)
    nb = number_op(basis, 0)
    nf = number_op(basis, 1)
    r = SparseOperator(adag.mat @ c.mat, grade=ODD)
    rd = r.dagger()
    ntot = diagonal_op(
        (basis.occupations_of_mode(0) + basis.occupations_of_mode(1)).astype(float),
        hermitian=True,
    )
    return AlgebraModel(
        name="jc_super",
        params={"cutoff": int(cutoff)},
        basis=basis,
        labels=["n_b", "n_f", "bf+", "bf-"],
        generators=[nb, nf, r, rd],
        cartan=[0, 1],
        root_pairs=[RootPair(2, 3, (_frac(1), _frac(-1)))],
        cartan_units=(1.0, 1.0),
        graded=True,
        annihilators=[2],
        casimirs={"excitations": ntot},
        truncated_modes=(0,),
    )


CATALOG = {
    "e2": _e2,
    "hw": _hw,
    "su2_spin": _su2_spin,
    "su2_schwinger": _su2_schwinger,
    "su3_schwinger": _su3_schwinger,
    "so5_quoted": _so5_quoted,
    "su11_single": _su11_single,
    "su11_intensity": _su11_intensity,
    "su11_twomode": _su11_twomode,
    "sp2n_boson": _sp2n_boson,
    "so2n_fermion": _so2n_fermion,
    "jc_super": _jc_super,
}


def build_algebra(name, **params) -> AlgebraModel:
    """Instantiate a catalog algebra over its matching Fock basis."""
    try:
        builder = CATALOG[name]
    except KeyError:
        raise ValueError(
            f"unknown algebra {name!r}; available: {', '.join(sorted(CATALOG))}"
        ) from None
    return builder(**params)


# ---------------------------------------------------------------------------
# non-closing seeds used by the closure gallery
# ---------------------------------------------------------------------------


def rabi_seed(cutoff=12):
    """Number operator, inversion, rotating and counter-rotating couplings of
    a driven two-level system on a truncated boson times spin-1/2 register.
    Returns (ops, labels, interior_mask)."""
    basis = FockBasis([boson(int(cutoff)), spin(Fraction(1, 2))])
    a, adag = ladder_ops(basis, 0)
    sm, sp_ = ladder_ops(basis, 1)
    sz = diagonal_op(
        (2.0 * basis.occupations_of_mode(1) - 1.0).astype(float), hermitian=True
    )
    rot = SparseOperator(a.mat @ sp_.mat + adag.mat @ sm.mat, hermitian=True)
    counter = SparseOperator(a.mat @ sm.mat + adag.mat @ sp_.mat, hermitian=True)
    n = number_op(basis, 0)
    mask = basis.interior_mask(window=2, truncated_modes=(0,))
    return [n, sz, rot, counter], ["n", "sz", "g+", "g-"], mask


def lmg_seed(S=8):
    """Inversion plus squared transverse spin; the quadratic term prevents
    closure. Returns (ops, labels, interior_mask=None)."""
    model = _su2_spin(S)
    sz, sp_, sm = model.generators
    sx = SparseOperator(0.5 * (sp_.mat + sm.mat), hermitian=True)
    sx2 = SparseOperator(sx.mat @ sx.mat / float(S), hermitian=True)
    return [sz, sx2], ["Sz", "Sx2/S"], None
