import random
from fractions import Fraction

import pytest

from mutower.chainring import RingBase
from mutower.errors import (
    InconsistentInput,
    NotConverged,
    ProfileTooShort,
)
from mutower.groupring import GroupSpec
from mutower.invariants import (
    MuProfile,
    estimate_mu,
    is_pseudonull_pi_part,
    mu_profile,
    recover_elementary,
    solve_multiplicities,
)
from mutower.synth import Garnish, GroundTruth, make_module

BASE2 = RingBase(2, 1, 1)
BASE3 = RingBase(3, 1, 1)
AB1 = GroupSpec.abelian(3, 1)
AB2 = GroupSpec.abelian(2, 2)


def module(gt, spec=AB1, base=None, obfuscate=True):
    return make_module(gt, spec, base or RingBase(spec.p, 1, 1), obfuscate=obfuscate)


def test_estimate_mu_exact_elementary():
    P = module(GroundTruth(0, (2,)), obfuscate=False)
    mu, converged, c_hat = estimate_mu(P, 4, [0, 1, 2])
    assert (mu, converged, c_hat) == (2, True, Fraction(0))


def test_estimate_mu_pseudonull():
    P = module(GroundTruth(0, (), (Garnish(1),)), spec=AB2, obfuscate=False)
    mu, converged, c_hat = estimate_mu(P, 2, [0, 1, 2, 3])
    assert (mu, converged, c_hat) == (0, True, Fraction(1))


def test_estimate_mu_zero_module():
    P = module(GroundTruth(0, ()), obfuscate=False)
    mu, converged, c_hat = estimate_mu(P, 3, [0, 1])
    assert (mu, converged, c_hat) == (0, True, Fraction(0))


def test_profile_mixed_torsion():
    # Lambda/pi + Lambda/pi^3: profile 2, 3, 4, 4
    P = module(GroundTruth(0, (1, 3), seed=5))
    prof = mu_profile(P, 4)
    assert [prof.mu[n] for n in (1, 2, 3, 4)] == [2, 3, 4, 4]
    assert all(prof.converged.values())


def test_profile_free_module():
    P = module(GroundTruth(1, ()), obfuscate=False)
    prof = mu_profile(P, 5)
    assert [prof.mu[n] for n in range(1, 6)] == [1, 2, 3, 4, 5]


def test_profile_matches_estimate_mu_pointwise():
    # the shared-diagonalization pipeline equals the direct N = n computation
    from mutower.lambda_mod import coinvariants_ordq, quotient_pi

    P = module(GroundTruth(1, (2, 2), seed=9))
    prof = mu_profile(P, 4)
    for n in range(1, 5):
        mu, converged, c_hat = estimate_mu(P, n, prof.levels_used)
        assert mu == prof.mu[n]
        assert converged == prof.converged[n]
        assert c_hat == prof.c_hat[n]
        Pq = quotient_pi(P, n)
        assert prof.raw[n].orders == {
            m: coinvariants_ordq(Pq, m, n) for m in prof.levels_used
        }


def test_recover_examples():
    def prof(mus, levels=(0, 1)):
        n_max = len(mus)
        return MuProfile(
            {n: mus[n - 1] for n in range(1, n_max + 1)},
            {},
            {n: True for n in range(1, n_max + 1)},
            tuple(levels),
            {n: Fraction(0) for n in range(1, n_max + 1)},
        )

    rep = recover_elementary(prof([2, 3, 4, 4]))
    assert (rep.free_rank, rep.multiplicities, rep.theta) == (0, (1, 0, 1), 3)
    rep = recover_elementary(prof([1, 2, 3, 4]))
    assert (rep.free_rank, rep.theta, rep.mu_total) == (1, 0, 0)
    rep = recover_elementary(prof([0, 0]))
    assert (rep.free_rank, rep.theta) == (0, 0)


def test_recover_requires_convergence():
    prof = MuProfile({1: 1, 2: 2}, {}, {1: True, 2: False}, (0, 1), {1: Fraction(0), 2: Fraction(0)})
    with pytest.raises(NotConverged):
        recover_elementary(prof)


def test_recover_profile_too_short():
    # rank 1 with alpha = 5: differences (2,2,2,2,2,1) never stabilize by 6
    P = module(GroundTruth(1, (5,)), obfuscate=False)
    prof = mu_profile(P, 6)
    with pytest.raises(ProfileTooShort):
        recover_elementary(prof)


def test_recover_rejects_non_model_profile():
    prof = MuProfile(
        {1: 2, 2: 3},
        {},
        {1: True, 2: True},
        (0, 1),
        {1: Fraction(0), 2: Fraction(0)},
    )
    # deltas (2, 1): tail neither repeated nor zero
    with pytest.raises(ProfileTooShort):
        recover_elementary(prof)


def test_roundtrip_with_obfuscation_seeds():
    rng = random.Random(0)
    for seed in range(4):
        gt = GroundTruth(rng.randrange(2), (1, 2), seed=seed)
        rep = recover_elementary(mu_profile(module(gt), 6))
        assert rep == gt.expected_rep()


def test_solve_multiplicities_examples():
    assert solve_multiplicities([2, 3], 2) == (1, 1)
    assert solve_multiplicities([0, 0], 2) == (0, 0)
    assert solve_multiplicities([2, 4], 2) == (0, 2)


def test_solve_multiplicities_rejects_nonmonotone():
    with pytest.raises(InconsistentInput):
        solve_multiplicities([1, 3], 2)  # delta increases
    with pytest.raises(InconsistentInput):
        solve_multiplicities([3, 2], 2)  # mu decreases


def test_cross_method_agreement():
    # difference method and matrix inversion agree on torsion modules
    for gt in [GroundTruth(0, (1, 3), seed=1), GroundTruth(0, (2, 2, 4), seed=2)]:
        rep = recover_elementary(mu_profile(module(gt), 6))
        assert rep.free_rank == 0
        mu_vec = [rep.mu_of_quotient(n) for n in range(1, rep.theta + 1)]
        assert solve_multiplicities(mu_vec, rep.theta) == rep.multiplicities


def test_is_pseudonull():
    assert is_pseudonull_pi_part(
        module(GroundTruth(0, (), (Garnish(1),)), spec=AB2), m_range=[0, 1, 2, 3]
    )
    assert not is_pseudonull_pi_part(module(GroundTruth(0, (1,))))
    assert is_pseudonull_pi_part(module(GroundTruth(0, ())))


def test_mu_inequality_on_synth_pairs():
    # if profiles agree at n = theta(M), then mu(M) <= mu(N)
    shapes = [(1,), (2,), (1, 1), (1, 3), (2, 2), (3,), (1, 2, 2)]
    reps = [GroundTruth(0, a).expected_rep() for a in shapes]
    for rm in reps:
        if rm.theta == 0:
            continue
        for rn in reps:
            if rm.mu_of_quotient(rm.theta) == rn.mu_of_quotient(rm.theta):
                assert rm.mu_total <= rn.mu_total


def test_pseudonull_perturbation_invariance():
    # adding a Lambda/(pi, g-1) summand changes no recovered field
    for seed in range(3):
        plain = GroundTruth(0, (2, 3), seed=seed)
        garn = GroundTruth(0, (2, 3), (Garnish(2),), seed=seed + 50)
        rp = recover_elementary(mu_profile(module(plain, spec=AB2), 6, [0, 1, 2, 3]))
        rg = recover_elementary(mu_profile(module(garn, spec=AB2), 6, [0, 1, 2, 3]))
        assert rp == rg == plain.expected_rep()


def test_direct_sum_additivity_of_recovered_invariants():
    a = GroundTruth(1, (2,), seed=3)
    b = GroundTruth(0, (1, 1), seed=4)
    ra = recover_elementary(mu_profile(module(a), 6))
    rb = recover_elementary(mu_profile(module(b), 6))
    both = GroundTruth(1, (1, 1, 2), seed=5)
    rboth = recover_elementary(mu_profile(module(both), 6))
    assert rboth.mu_total == ra.mu_total + rb.mu_total
    assert rboth.free_rank == ra.free_rank + rb.free_rank
