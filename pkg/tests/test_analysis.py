import random
from fractions import Fraction

import pytest

from framecalc import (
    Subspace,
    abelian_algebra,
    apply_endo,
    ce_differential,
    commutes_with_holonomy,
    connection_from_entries,
    covariant_derivative,
    curvature,
    darboux_flat,
    divergence,
    endo_power,
    endo_trace,
    infinitesimal_holonomy,
    is_isotropic,
    is_lagrangian,
    kodaira_thurston,
    lower_index,
    musical_endomorphism,
    musical_flat,
    nilpotency_index,
    null_filtration,
    parallel_endomorphisms,
    raise_index,
    structure_constants,
    symplectic_form,
    trace_power,
    validate_algebra,
    verify_automorphism,
    zero_connection,
)
from framecalc.errors import ParameterError, PreconditionError
from framecalc.moduli import automorphism_space, symplectic_connection_space
from framecalc.scalars import Scalar
from framecalc.tensors import Tensor, basis_vector, identity_endomorphism
from helpers import (
    random_symplectic_model,
    random_vector,
    rational,
    sample_connection,
    symplectic_candidate,
)

F = Fraction

KT0 = kodaira_thurston(0)
E = [basis_vector(4, i) for i in range(1, 5)]
OM = KT0.omega


def _omega_skew_endo(rng, dim, omega):
    """Random endomorphism whose lowered form is antisymmetric."""
    parts = {}
    for i in range(1, dim + 1):
        for j in range(i + 1, dim + 1):
            v = rational(rng)
            if v:
                parts[(i, j)] = Scalar.rational(v)
    lowered = symplectic_candidate(dim, parts)
    return raise_index(lowered, 1, omega)


# -- musical endomorphism ------------------------------------------------------


def test_musical_endomorphism_kt_action():
    a = musical_endomorphism(KT0.algebra, OM, KT0.connection, E[1])
    assert apply_endo(a, E[1]) == -E[2]
    assert apply_endo(a, E[3]) == E[0]
    assert apply_endo(a, E[0]).is_zero()
    assert apply_endo(a, E[2]).is_zero()


def test_musical_endomorphism_symbolic_family_is_parameter_free():
    kt = kodaira_thurston()
    a = musical_endomorphism(kt.algebra, kt.omega, kt.connection, E[1])
    assert a.is_rational()
    assert apply_endo(a, E[1]) == -E[2]


def test_musical_endomorphism_zero_for_symplectic_field():
    a = musical_endomorphism(KT0.algebra, OM, KT0.connection, E[0])
    assert a.is_zero()


def test_musical_endomorphism_lowered_equals_d_flat():
    rng = random.Random(3)
    for _ in range(8):
        x = random_vector(rng, 4)
        a = musical_endomorphism(KT0.algebra, OM, KT0.connection, x)
        d_flat = ce_differential(KT0.algebra, musical_flat(x, OM))
        assert lower_index(a, 1, OM) == d_flat


def test_musical_endomorphism_requires_preconditions():
    with pytest.raises(PreconditionError):
        musical_endomorphism(KT0.algebra, OM, zero_connection(4), E[1])
    # symmetric, so torsion-free on the abelian algebra, but breaks the form
    bad = connection_from_entries(4, {(1, 1, 1): 1})
    with pytest.raises(PreconditionError) as err:
        musical_endomorphism(abelian_algebra(4), OM, bad, E[1])
    assert "preserve" in str(err.value)


def test_trace_equals_twice_divergence():
    rng = random.Random(5)
    for model in (darboux_flat(2), KT0):
        space = symplectic_connection_space(model.algebra, model.omega)
        for _ in range(5):
            conn = sample_connection(rng, space)
            x = random_vector(rng, model.dim)
            a = musical_endomorphism(model.algebra, model.omega, conn, x)
            assert endo_trace(a) == divergence(model.algebra, conn, x) * 2


# -- trace powers ----------------------------------------------------------------


def test_trace_powers_kt_all_vanish():
    a = musical_endomorphism(KT0.algebra, OM, KT0.connection, E[1])
    for k in range(1, 5):
        assert trace_power(a, k) == Scalar.zero()


def test_trace_power_identity_endomorphism():
    assert trace_power(identity_endomorphism(4), 3) == Scalar.rational(4)


def test_trace_power_contraction_identity():
    # tr A^k = sum_{ij} A^{ij} (A^(k-1))_{ij} for omega-skew endomorphisms,
    # plain double sums with both raisings on the first factor
    rng = random.Random(7)
    for _ in range(12):
        a = _omega_skew_endo(rng, 4, OM)
        for k in range(2, 5):
            upup = raise_index(a, 0, OM)
            low = lower_index(endo_power(a, k - 1), 1, OM)
            rhs = Scalar.zero()
            for i in range(1, 5):
                for j in range(1, 5):
                    rhs = rhs + upup[(i, j)] * low[(i, j)]
            assert trace_power(a, k) == rhs


def test_powers_of_skew_endomorphisms_stay_skew():
    from framecalc.tensors import is_antisymmetric

    rng = random.Random(9)
    for _ in range(8):
        a = _omega_skew_endo(rng, 4, OM)
        for k in range(1, 4):
            assert is_antisymmetric(lower_index(endo_power(a, k), 1, OM))


# -- nilpotency and filtration ------------------------------------------------------


def test_nilpotency_examples():
    a = musical_endomorphism(KT0.algebra, OM, KT0.connection, E[1])
    assert nilpotency_index(a) == 2
    assert nilpotency_index(Tensor.zeros(4, ("down", "up"))) == 1
    assert nilpotency_index(identity_endomorphism(4)) is None


def test_null_filtration_kt():
    a = musical_endomorphism(KT0.algebra, OM, KT0.connection, E[1])
    kernels, images = null_filtration(a)
    span13 = Subspace.from_vectors(4, [E[0], E[2]])
    assert kernels[0] == span13
    assert images[0] == span13
    assert images[1].dim == 0
    assert kernels[1].dim == 4


def test_null_filtration_zero_endomorphism():
    kernels, images = null_filtration(Tensor.zeros(3, ("down", "up")))
    assert kernels[0].dim == 3
    assert images[0].dim == 0


def test_null_filtration_chains_monotone():
    rng = random.Random(11)
    for _ in range(10):
        # strictly upper-triangular matrices are nilpotent
        entries = {}
        for i in range(1, 5):
            for j in range(i + 1, 5):
                v = rational(rng)
                if v:
                    entries[(i, j)] = Scalar.rational(v)
        a = Tensor.from_entries(4, ("down", "up"), entries)
        kernels, images = null_filtration(a)
        for k in range(len(kernels) - 1):
            assert kernels[k + 1].contains_subspace(kernels[k])
            assert images[k].contains_subspace(images[k + 1])


def test_null_filtration_requires_rational_entries():
    b = Scalar.parameter("b")
    a = Tensor.from_entries(2, ("down", "up"), {(1, 2): b})
    with pytest.raises(ParameterError):
        null_filtration(a)


def test_isotropic_examples():
    assert is_isotropic(OM, Subspace.from_vectors(4, [E[0], E[2]]))
    assert is_lagrangian(OM, Subspace.from_vectors(4, [E[0], E[2]]))
    assert not is_isotropic(OM, Subspace.from_vectors(4, [E[0], E[1]]))
    assert is_isotropic(OM, Subspace.zero(4))
    assert not is_lagrangian(OM, Subspace.zero(4))


# -- holonomy ---------------------------------------------------------------------


def test_holonomy_flat_models_empty():
    assert infinitesimal_holonomy(KT0.algebra, KT0.connection) == []
    kt = kodaira_thurston()
    assert infinitesimal_holonomy(kt.algebra, kt.connection) == []
    assert infinitesimal_holonomy(abelian_algebra(4), zero_connection(4)) == []


def test_holonomy_contains_curvature_endomorphism():
    conn = connection_from_entries(4, {(2, 2, 4): 1, (4, 4, 2): 1})
    gens = infinitesimal_holonomy(abelian_algebra(4), conn)
    assert gens
    target = Tensor.from_entries(4, ("down", "up"), {(2, 2): 1, (4, 4): -1})
    rows = [[x.as_fraction() for x in g.comps] for g in gens]
    from framecalc.linalg import rank

    assert rank(rows + [[x.as_fraction() for x in target.comps]]) == rank(rows)


def test_holonomy_requires_torsion_free():
    with pytest.raises(PreconditionError):
        infinitesimal_holonomy(KT0.algebra, zero_connection(4))


def test_holonomy_order_cap_raises():
    from framecalc.errors import StabilizationError

    conn = connection_from_entries(4, {(2, 2, 4): 1, (4, 4, 2): 1})
    with pytest.raises(StabilizationError):
        infinitesimal_holonomy(abelian_algebra(4), conn, max_order=0)


def test_commutes_with_holonomy_trivial_cases():
    rng = random.Random(13)
    any_endo = _omega_skew_endo(rng, 4, OM)
    assert commutes_with_holonomy(any_endo, [])
    conn = connection_from_entries(4, {(2, 2, 4): 1, (4, 4, 2): 1})
    gens = infinitesimal_holonomy(abelian_algebra(4), conn)
    assert commutes_with_holonomy(identity_endomorphism(4), gens)


def test_parallel_endomorphisms_commute_with_generators():
    rng = random.Random(15)
    found_nonflat = 0
    models = [(darboux_flat(2).algebra, darboux_flat(2).omega)]
    while len(models) < 3:
        models.append(random_symplectic_model(rng, 4))
    for alg, om in models:
        space = symplectic_connection_space(alg, om)
        for _ in range(6):
            conn = sample_connection(rng, space)
            riem = curvature(alg, conn)
            if riem.is_zero():
                continue
            found_nonflat += 1
            gens = infinitesimal_holonomy(alg, conn)
            assert gens
            for par in parallel_endomorphisms(alg, conn):
                assert commutes_with_holonomy(par, gens)
                # generators preserve the kernel chain of any parallel endo
                kernels, _ = null_filtration(par)
                for ker in kernels:
                    for g in gens:
                        for v in ker.basis:
                            assert ker.contains(apply_endo(g, v))
    assert found_nonflat >= 5


def test_parallel_endomorphisms_contain_identity():
    pars = parallel_endomorphisms(KT0.algebra, KT0.connection)
    rows = Subspace.from_vectors(
        16, [Tensor(16, ("up",), tuple(p.comps)) for p in pars]
    )
    assert rows.contains(Tensor(16, ("up",), tuple(identity_endomorphism(4).comps)))


# -- aggregated report ---------------------------------------------------------------


def test_verify_automorphism_kt_e2():
    rep = verify_automorphism(KT0.algebra, OM, KT0.connection, E[1])
    assert rep.is_affine_automorphism
    assert not rep.is_symplectic
    assert rep.d_flat[(2, 4)] == Scalar.rational(-1)
    assert rep.d_flat_parallel
    assert rep.wedge_identity_holds
    assert rep.divergence == Scalar.zero()
    assert rep.nilpotency_index == 2
    assert all(t == Scalar.zero() for t in rep.trace_powers)
    assert rep.image_chain[0].dim == 2
    assert rep.image_isotropic and rep.image_lagrangian
    assert rep.holonomy_commutes


def test_verify_automorphism_kt_e1_symplectic():
    rep = verify_automorphism(KT0.algebra, OM, KT0.connection, E[0])
    assert rep.is_affine_automorphism
    assert rep.is_symplectic
    assert rep.d_flat.is_zero()
    assert rep.nilpotency_index == 1


def test_verify_automorphism_darboux_everything_symplectic():
    model = darboux_flat(1)
    rng = random.Random(17)
    for _ in range(5):
        x = random_vector(rng, 2)
        rep = verify_automorphism(model.algebra, model.omega, model.connection, x)
        assert rep.is_affine_automorphism
        assert rep.is_symplectic


def test_verify_automorphism_beta_substitution():
    kt = kodaira_thurston()
    rep = verify_automorphism(kt.algebra, kt.omega, kt.connection, E[1], beta=F(1, 6))
    assert rep.is_affine_automorphism and not rep.is_symplectic


def test_verify_automorphism_gates_on_non_automorphism():
    # on the ax+b model, E1 is not an automorphism: gated fields stay None
    alg = validate_algebra(structure_constants(2, {(1, 2, 1): 1}))
    conn = connection_from_entries(2, {(1, 2, 1): 1})
    om2 = symplectic_form(2, {(1, 2): 1})
    rep = verify_automorphism(alg, om2, conn, basis_vector(2, 1))
    assert not rep.is_affine_automorphism
    assert rep.trace_powers is None and rep.nilpotency_index is None
    assert rep.endomorphism is None


def test_verify_automorphism_non_nilpotent_witness():
    # on the ax+b model, E2 is an automorphism whose endomorphism is the identity
    alg = validate_algebra(structure_constants(2, {(1, 2, 1): 1}))
    conn = connection_from_entries(2, {(1, 2, 1): 1})
    om2 = symplectic_form(2, {(1, 2): 1})
    rep = verify_automorphism(alg, om2, conn, basis_vector(2, 2))
    assert rep.is_affine_automorphism
    assert not rep.is_symplectic
    assert rep.nilpotency_index is None
    assert rep.endomorphism == identity_endomorphism(2)
    assert rep.trace_powers[0] == Scalar.rational(2)
    assert rep.divergence == Scalar.one()
    assert rep.wedge_identity_holds  # d(X-flat) = (div X) Omega exactly


def test_verify_automorphism_precondition_errors():
    with pytest.raises(PreconditionError) as err:
        verify_automorphism(KT0.algebra, OM, zero_connection(4), E[1])
    assert "torsion nonzero at (2, 4)" in str(err.value)


def test_chain_invariants_on_sampled_automorphisms():
    # whenever L_X nabla = 0 on a form-preserving torsion-free connection:
    # nabla d(X-flat) = 0 and the wedge identity holds
    rng = random.Random(19)
    model = darboux_flat(2)
    space = symplectic_connection_space(model.algebra, model.omega)
    checked = 0
    for _ in range(6):
        conn = sample_connection(rng, space)
        aut = automorphism_space(model.algebra, conn)
        for x in aut.basis:
            rep = verify_automorphism(model.algebra, model.omega, conn, x)
            assert rep.is_affine_automorphism
            assert rep.d_flat_parallel
            assert rep.wedge_identity_holds
            assert covariant_derivative(model.algebra, conn, rep.d_flat).is_zero()
            checked += 1
    assert checked >= 20
