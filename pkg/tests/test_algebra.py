from fractions import Fraction

import numpy as np
import pytest

from liefock import (
    SparseOperator,
    build_algebra,
    extract_structure_constants,
    find_reference_states,
    graded_commutator,
    lie_closure,
    lmg_seed,
    rabi_seed,
    verify_casimir,
    verify_model,
)
from liefock.errors import DegenerateGeneratorsError


# --- symbolic oracle for commutators of number-conserving boson bilinears ---
# [a_i^dag a_j, a_k^dag a_l] = delta_jk a_i^dag a_l - delta_li a_k^dag a_j


def bilinear_commutator(ij, kl):
    (i, j), (k, l) = ij, kl
    out = {}
    if j == k:
        out[(i, l)] = out.get((i, l), 0) + 1
    if l == i:
        out[(k, j)] = out.get((k, j), 0) - 1
    return {key: v for key, v in out.items() if v}


def test_su2_schwinger_shape_and_root():
    model = build_algebra("su2_schwinger", N=4)
    assert model.dim == 3
    assert model.basis.dim == 5
    (pair,) = model.root_pairs
    assert model.labels[pair.raising] == "S+"
    assert pair.root == (Fraction(1),)
    # defining eigen-relation [Sz, S+] = +1 * S+
    sz, sp = model.generator("Sz"), model.generator("S+")
    comm = graded_commutator(sz, sp)
    assert np.allclose(comm.toarray(), sp.toarray())


def test_e2_shift_commutator_vanishes_on_interior():
    model = build_algebra("e2", L=21)
    ep, em = model.generator("E+"), model.generator("E-")
    comm = graded_commutator(em, ep)
    idx = np.where(model.interior())[0]
    assert np.allclose(comm.restricted(idx), 0.0)
    # and is NOT zero on the full truncated block (boundary defect)
    assert comm.max_norm() > 0.5


def test_hw_number_shift_exact():
    model = build_algebra("hw", cutoff=10)
    n, a = model.generator("n"), model.generator("a")
    comm = graded_commutator(n, a)
    assert np.allclose(comm.toarray(), -a.toarray())


def test_structure_constants_su2_cartesian():
    # Hermitian triple: [Sx, Sy] = i Sz means f_xy^z = 1 in the i*f convention
    model = build_algebra("su2_spin", S=2)
    sz, sp, sm = model.generators
    sx = SparseOperator(0.5 * (sp.mat + sm.mat), hermitian=True)
    sy = SparseOperator((sp.mat - sm.mat) / 2j, hermitian=True)
    sc = extract_structure_constants([sx, sy, sz], labels=["Sx", "Sy", "Sz"])
    assert sc.closed
    assert sc.coefficient("Sx", "Sy", "Sz") == pytest.approx(1j)
    assert sc.f[0, 1, 2] == pytest.approx(1.0)
    # graded antisymmetry of the raw coefficients for even pairs
    assert np.allclose(sc.coeffs[0, 1], -sc.coeffs[1, 0])


def test_su3_root_coefficient_matches_symbolic_oracle():
    # oracle on mode indices: I+ = (0,1), U+ = (1,2), V+ = (0,2)
    assert bilinear_commutator((0, 1), (1, 2)) == {(0, 2): 1}
    model = build_algebra("su3_schwinger", N=4)
    sc = extract_structure_constants(model.generators, labels=list(model.labels))
    assert sc.closed
    assert sc.coefficient("I+", "U+", "V+") == pytest.approx(1.0, abs=1e-12)
    assert np.max(sc.residuals) < 1e-12


def test_su3_roots_sum_exactly():
    model = build_algebra("su3_schwinger", N=2)
    r_i, r_u, r_v = (p.root for p in model.root_pairs)
    assert tuple(a + b for a, b in zip(r_i, r_u)) == r_v  # exact rationals


def test_degenerate_generator_set_rejected():
    model = build_algebra("su2_spin", S=1)
    sz, sp, sm = model.generators
    dup = SparseOperator(sz.mat * (1 + 1e-15))
    with pytest.raises(DegenerateGeneratorsError):
        extract_structure_constants([sz, dup, sp], labels=["Sz", "Sz_copy", "S+"])


@pytest.mark.parametrize(
    "name,kwargs",
    [
        ("e2", {"L": 15}),
        ("hw", {"cutoff": 14}),
        ("su2_spin", {"S": 3}),
        ("su2_schwinger", {"N": 5}),
        ("su3_schwinger", {"N": 3}),
        ("su11_single", {"cutoff": 16}),
        ("su11_intensity", {"cutoff": 16}),
        ("su11_twomode", {"cutoff": 7}),
        ("sp2n_boson", {"modes": 2, "cutoff": 6}),
        ("so2n_fermion", {"modes": 2}),
        ("jc_super", {"cutoff": 8}),
    ],
)
def test_catalog_closes_at_seed_dimension(name, kwargs):
    model = build_algebra(name, **kwargs)
    report = lie_closure(
        model.generators,
        cap=4 * model.dim + 8,
        graded=model.graded,
        interior=model.interior(),
        labels=list(model.labels),
    )
    assert report.closed
    assert report.dimension == model.dim
    assert report.max_residual < 1e-10
    assert report.iterations == sorted(report.iterations)


def test_so5_quoted_set_does_not_close_at_ten():
    # the quoted ten generators generate five more directions; the tool
    # reports the closure it finds (15) rather than asserting the name
    model = build_algebra("so5_quoted", N=2)
    report = lie_closure(
        model.generators, cap=40, interior=model.interior(), labels=list(model.labels)
    )
    assert report.closed
    assert report.dimension == 15
    assert report.max_residual < 1e-10


def test_so5_site_count_disagrees_with_quadratic_formula():
    # both counts are reported, neither hardcoded as truth: for N = 2 the
    # sector has 10 states on 9 distinct weight sites, while N^2/2 + N + 1 = 5
    from liefock import build_fsl, weight_coordinates
    from liefock.operators import linear_combination

    model = build_algebra("so5_quoted", N=2)
    terms = ["Sa+", "Sa-", "Sb+", "Sb-", "Sab+", "Sab-", "Sba+", "Sba-"]
    H = linear_combination([model.generator(t) for t in terms], [1.0] * 8)
    graph = build_fsl(H, model.basis)
    wl = weight_coordinates(graph, model.cartan_ops())
    claimed = 2**2 // 2 + 2 + 1
    assert model.basis.dim == 10
    assert len(wl.sites) == 9
    assert len(wl.sites) != claimed and model.basis.dim != claimed


def test_sp2n_dimension_formula_and_independence():
    for m, cutoff in ((2, 6), (3, 4)):
        model = build_algebra("sp2n_boson", modes=m, cutoff=cutoff)
        expected = m * (2 * m + 1)
        assert model.dim == expected
        # brute-force independence: rank of the flattened generator family
        idx = np.where(model.interior())[0]
        stack = np.stack([g.restricted(idx).ravel() for g in model.generators])
        assert np.linalg.matrix_rank(stack, tol=1e-8) == expected
        report = lie_closure(
            model.generators, cap=expected + 10, interior=model.interior()
        )
        assert report.closed and report.dimension == expected


def test_so2n_dimension_formula():
    for m in (2, 3):
        model = build_algebra("so2n_fermion", modes=m)
        expected = m * (2 * m - 1)
        assert model.dim == expected
        report = lie_closure(model.generators, cap=expected + 10)
        assert report.closed and report.dimension == expected


def test_jc_super_graded_closure_and_odd_bracket():
    model = build_algebra("jc_super", cutoff=10)
    report = lie_closure(
        model.generators, cap=20, graded=True, interior=model.interior(),
        labels=list(model.labels),
    )
    assert report.closed and report.dimension == 4
    # odd-odd bracket lies in the span of the two number operators
    sc = extract_structure_constants(
        model.generators, graded=True, interior=model.interior(), labels=list(model.labels)
    )
    anti = sc.coeffs[2, 3]  # {bf+, bf-}
    assert sc.residuals[2, 3] < 1e-12
    assert anti[0] == pytest.approx(1.0, abs=1e-12)  # n_b coefficient
    assert anti[1] == pytest.approx(1.0, abs=1e-12)  # n_f coefficient
    assert abs(anti[2]) < 1e-12 and abs(anti[3]) < 1e-12
    # graded symmetry: odd-odd coefficients are symmetric under swap
    assert np.allclose(sc.coeffs[3, 2], sc.coeffs[2, 3])


def test_rabi_seed_exceeds_cap():
    ops, labels, mask = rabi_seed(cutoff=12)
    report = lie_closure(ops, cap=64, interior=mask, labels=labels)
    assert not report.closed
    assert report.dimension > 64


def test_lmg_seed_exceeds_cap():
    ops, labels, mask = lmg_seed(S=8)
    report = lie_closure(ops, cap=64, interior=mask, labels=labels)
    assert not report.closed
    assert report.dimension > 64


def test_cap_smaller_than_seed_rejected():
    model = build_algebra("su2_spin", S=1)
    with pytest.raises(ValueError, match="cap"):
        lie_closure(model.generators, cap=2)


def test_casimir_residuals():
    su2 = build_algebra("su2_spin", S=3)
    assert verify_casimir(su2.casimirs["S2"], su2) < 1e-12

    su3 = build_algebra("su3_schwinger", N=4)
    assert verify_casimir(su3.casimirs["total_number"], su3) < 1e-12

    su11 = build_algebra("su11_single", cutoff=30)
    assert verify_casimir(su11.casimirs["hyperbolic"], su11) < 1e-10
    # a non-Casimir scores badly
    assert verify_casimir(su11.generator("K+"), su11) > 1e-3


def test_reference_states():
    su2 = build_algebra("su2_spin", S=3)
    refs = find_reference_states(su2)
    assert len(refs) == 1
    top = su2.basis.vector((6,))  # level 2S is m = +S
    assert abs(np.vdot(refs[0], top)) == pytest.approx(1.0)

    su11 = build_algebra("su11_single", cutoff=24)
    refs = find_reference_states(su11)
    span = np.stack([np.abs(r) for r in refs])
    assert len(refs) == 2
    populated = np.flatnonzero(span.sum(axis=0) > 1e-10)
    assert list(populated) == [0, 1]

    su3 = build_algebra("su3_schwinger", N=3)
    refs = find_reference_states(su3)
    assert len(refs) == 1
    corner = su3.basis.vector((3, 0, 0))
    assert abs(np.vdot(refs[0], corner)) == pytest.approx(1.0)

    so5 = build_algebra("so5_quoted", N=3)
    refs = find_reference_states(so5)
    assert len(refs) == 1
    corner = so5.basis.vector((3, 0, 0, 0))
    assert abs(np.vdot(refs[0], corner)) == pytest.approx(1.0)


def test_e2_has_no_reference_state():
    model = build_algebra("e2", L=21)
    assert find_reference_states(model) == []


def test_hw_reference_is_vacuum():
    model = build_algebra("hw", cutoff=12)
    refs = find_reference_states(model)
    assert len(refs) == 1
    assert abs(refs[0][0]) == pytest.approx(1.0)


def test_unknown_algebra_and_bad_k():
    with pytest.raises(ValueError, match="unknown algebra"):
        build_algebra("so7")
    with pytest.raises(ValueError, match="k must be"):
        build_algebra("su11_single", k=Fraction(1, 2), cutoff=10)


def test_verify_model_full_catalog():
    cases = [
        ("e2", {"L": 15}),
        ("hw", {"cutoff": 12}),
        ("su2_spin", {"S": Fraction(5, 2)}),
        ("su2_schwinger", {"N": 4}),
        ("su3_schwinger", {"N": 3}),
        ("so5_quoted", {"N": 2}),
        ("su11_single", {"k": Fraction(3, 4), "cutoff": 14}),
        ("su11_intensity", {"cutoff": 14}),
        ("su11_twomode", {"cutoff": 6}),
        ("sp2n_boson", {"modes": 2, "cutoff": 5}),
        ("so2n_fermion", {"modes": 2}),
        ("jc_super", {"cutoff": 8}),
    ]
    for name, kwargs in cases:
        model = build_algebra(name, **kwargs)
        report = verify_model(model)
        assert report["cartan_ok"], name
        assert report["root_eigen_ok"], name
        assert report["closure"]["closed"], name
        for cas in report["casimirs"]:
            assert cas["residual"] < 1e-10, (name, cas)
        expected_dim = 15 if name == "so5_quoted" else model.dim
        assert report["closure"]["dim"] == expected_dim, name


def test_su11_intensity_matrix_elements():
    model = build_algebra("su11_intensity", cutoff=10)
    kp = model.generator("K+").toarray()
    for n in range(9):
        assert kp[n + 1, n] == pytest.approx(n + 1)


JACOBI_CASES = [
    ("e2", {"L": 9}),
    ("hw", {"cutoff": 8}),
    ("su2_spin", {"S": 2}),
    ("su2_schwinger", {"N": 3}),
    ("su3_schwinger", {"N": 2}),
    ("so5_quoted", {"N": 1}),
    ("su11_single", {"cutoff": 8}),
    ("su11_intensity", {"cutoff": 8}),
    ("su11_twomode", {"cutoff": 4}),
    ("sp2n_boson", {"modes": 2, "cutoff": 4}),
    ("so2n_fermion", {"modes": 2}),
]


@pytest.mark.parametrize("name,kwargs", JACOBI_CASES)
def test_jacobi_identity_on_catalog(name, kwargs):
    # a matrix identity, so it holds on the full truncated block
    model = build_algebra(name, **kwargs)
    gens = model.generators
    scale = max(max(g.fro_norm(), 1.0) for g in gens) ** 3
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            for c in range(b + 1, len(gens)):
                total = (
                    graded_commutator(graded_commutator(gens[a], gens[b]), gens[c]).toarray()
                    + graded_commutator(graded_commutator(gens[b], gens[c]), gens[a]).toarray()
                    + graded_commutator(graded_commutator(gens[c], gens[a]), gens[b]).toarray()
                )
                assert np.max(np.abs(total)) < 1e-12 * scale


def test_catalog_root_pairs_are_structural_daggers():
    cases = JACOBI_CASES + [("jc_super", {"cutoff": 6})]
    for name, kwargs in cases:
        model = build_algebra(name, **kwargs)
        for pair in model.root_pairs:
            up = model.generators[pair.raising].mat
            down = model.generators[pair.lowering].mat
            assert (up - down.conj().T.tocsr()).nnz == 0, (name, pair)
