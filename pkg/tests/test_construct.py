import json

import pytest

from period_index.cyclo import CycloElem
from period_index.ecq import curve_over, point_over
from period_index.kummer import KummerClass, make_basis
from period_index.construct import (
    InputError,
    build_xi,
    canonical_json,
    certify_mode_A,
    certify_mode_B,
    compose_coprime,
    content_digest,
    even_adjust,
    lichtenbaum_check,
    make_trivial_certificate,
    verify_certificate,
)

BOUND = 10**5


def _cubic():
    cv = curve_over(3, [0, 0, 1, 0, 0])
    S = point_over(3, (0, 0))
    T = (CycloElem.rational(3, -1), CycloElem.zeta(3))
    return cv, make_basis(cv, 3, S, T), [S]


def _quadratic():
    # full 2-torsion rational: y^2 = x^3 - x
    cv = curve_over(2, [0, 0, 0, -1, 0])
    S, T = point_over(2, (0, 0)), point_over(2, (1, 0))
    return cv, make_basis(cv, 2, S, T), [S, T]


def _quartic():
    # rational 4-torsion point (24, 120) on y^2 = x^3 + 7x^2 - 144x
    cv = curve_over(4, [0, 7, 0, -144, 0])
    i = CycloElem.zeta(4)
    S = point_over(4, (24, 120))
    T = (12 * i, 36 - 48 * i)
    return cv, make_basis(cv, 4, S, T), [S, point_over(4, (0, 0))]


@pytest.fixture(scope="module")
def cert33():
    cv, basis, gens = _cubic()
    return certify_mode_B(cv, basis, 3, gens, BOUND)


@pytest.fixture(scope="module")
def cert31():
    cv, basis, gens = _cubic()
    return certify_mode_B(cv, basis, 1, gens, BOUND)


@pytest.fixture(scope="module")
def cert22(request):
    cv, basis, gens = _quartic()
    return even_adjust(cv, basis, 2, 2, gens, BOUND)


def _roundtrip(cert):
    return json.loads(canonical_json(cert))


# ---------------------------------------------------------------- build_xi


def test_build_xi_full_target_keeps_the_pair():
    a = CycloElem.rational(3, 4) + CycloElem.zeta(3)
    b = CycloElem.rational(3, 2) + 5 * CycloElem.zeta(3)
    xi = build_xi(a, b, 3, 3)
    assert isinstance(xi, KummerClass)
    assert xi.a == a and xi.b == b


def test_build_xi_target_one_powers_the_second_coordinate():
    a = CycloElem.rational(3, 4) + CycloElem.zeta(3)
    b = CycloElem.rational(3, 2) + 5 * CycloElem.zeta(3)
    xi = build_xi(a, b, 3, 1)
    assert xi.b == b**3


def test_build_xi_intermediate_target():
    i = CycloElem.zeta(4)
    a = 3 + 2 * i
    b = 1 + 4 * i
    assert build_xi(a, b, 4, 2).b == b * b


def test_build_xi_rejects_non_divisor_targets():
    a = CycloElem.rational(3, 2)
    with pytest.raises(InputError):
        build_xi(a, a, 3, 2)
    with pytest.raises(InputError):
        build_xi(a, a, 3, 0)


def test_build_xi_rejects_level_mismatch():
    with pytest.raises(InputError):
        build_xi(CycloElem.rational(3, 2), CycloElem.rational(4, 2), 3, 3)


# ---------------------------------------------------------- lichtenbaum


def test_lichtenbaum_examples():
    assert lichtenbaum_check(2, 4)
    assert not lichtenbaum_check(3, 27)
    assert lichtenbaum_check(5, 5)
    assert lichtenbaum_check(1, 1)
    assert lichtenbaum_check(6, 36)
    assert not lichtenbaum_check(4, 6)


def test_lichtenbaum_rejects_nonpositive():
    with pytest.raises(InputError):
        lichtenbaum_check(0, 1)
    with pytest.raises(InputError):
        lichtenbaum_check(2, -4)


# ------------------------------------------------------------ direct runs


def test_cubic_full_target_claims(cert33):
    assert cert33["summary"] == {
        "period": "3",
        "index": "9",
        "places": ["757", "13879"],
    }
    assert cert33["context"]["claims_field"] == "rational"
    assert cert33["route"] == {
        "kind": "direct",
        "construction_level": "3",
        "symbol_exactness": "odd-level",
    }
    # one shift row per proper divisor of the target
    assert [r["ell_prime"] for r in cert33["index_lower"]["rows"]] == ["1"]


def test_cubic_trivial_target_claims(cert31):
    assert cert31["summary"]["period"] == "3"
    assert cert31["summary"]["index"] == "3"
    # order-one obstruction: nothing to rule out below the level itself
    assert cert31["index_lower"]["rows"] == []
    assert cert31["obstruction"]["global_order"] == "1"


def test_period_rows_cover_every_proper_multiple(cert33):
    assert [(r["m"], r["valuation"]) for r in cert33["period"]["rows"]] == [
        ("1", "1"),
        ("2", "2"),
    ]


def test_certificates_verify_after_roundtrip(cert33, cert31, cert22):
    for cert in (cert33, cert31, cert22):
        ok, trace = verify_certificate(_roundtrip(cert))
        assert ok, trace


def test_rebuild_is_byte_identical(cert33):
    cv, basis, gens = _cubic()
    again = certify_mode_B(cv, basis, 3, gens, BOUND)
    assert canonical_json(again) == canonical_json(cert33)


def test_mode_a_equals_mode_b_on_trivial_action():
    # level 2 over Q: the cyclotomic field is Q itself, so the norm step
    # degenerates and both modes must emit the same bytes up to the label
    cv, basis, gens = _quadratic()
    a = certify_mode_A(cv, basis, 1, gens, BOUND)
    b = certify_mode_B(cv, basis, 1, gens, BOUND)

    def strip(cert):
        ctx = {k: v for k, v in cert["context"].items() if k != "mode"}
        return canonical_json({**cert, "context": ctx})

    assert a["context"]["mode"] == "A"
    assert b["context"]["mode"] == "B"
    assert strip(a) == strip(b)
    assert a["summary"] == {"period": "2", "index": "2", "places": ["17", "41"]}


# ------------------------------------------------------------ even routing


def test_even_direct_mode_demands_doubled_data():
    cv, basis, gens = _quartic()
    with pytest.raises(InputError, match="even_adjust"):
        certify_mode_A(cv, basis, 2, gens, BOUND)
    with pytest.raises(InputError, match="even_adjust"):
        certify_mode_B(cv, basis, 1, gens, BOUND)


def test_even_adjust_rejects_direct_targets():
    cv, basis, gens = _quartic()
    with pytest.raises(InputError, match="direct modes"):
        even_adjust(cv, basis, 4, 4, gens, BOUND)


def test_even_adjust_rejects_wrong_level_data():
    cv, basis, gens = _quadratic()
    with pytest.raises(InputError, match="level 4"):
        even_adjust(cv, basis, 2, 2, gens, BOUND)


def test_even_adjust_rejects_non_power_of_two():
    cv, basis, gens = _cubic()
    with pytest.raises(InputError, match="powers of two"):
        even_adjust(cv, basis, 3, 1, gens, BOUND)


def test_doubled_route_record(cert22):
    assert cert22["summary"]["period"] == "2"
    assert cert22["summary"]["index"] == "4"
    assert cert22["route"]["kind"] == "doubled"
    assert cert22["route"]["construction_level"] == "4"
    assert cert22["route"]["raw_symbol_order_at_v"] == "4"
    assert cert22["route"]["stable_generator_rational"] is True
    assert cert22["obstruction"]["place_consistency"] == "doubles-equal"


def test_doubled_trivial_target():
    cv, basis, gens = _quartic()
    cert = even_adjust(cv, basis, 2, 1, gens, BOUND)
    assert cert["summary"]["period"] == "2"
    assert cert["summary"]["index"] == "2"
    ok, trace = verify_certificate(_roundtrip(cert))
    assert ok, trace


def test_declared_order_must_match():
    cv, basis, gens = _cubic()
    with pytest.raises(InputError, match="declared"):
        certify_mode_B(cv, basis, 3, gens, BOUND, declared_order=9)
    cv4, basis4, gens4 = _quartic()
    with pytest.raises(InputError, match="declared"):
        even_adjust(cv4, basis4, 2, 2, gens4, BOUND, declared_order=2)


# ------------------------------------------------------------- composition


def test_compose_coprime_claims(cert22, cert33):
    comp = compose_coprime(cert22, cert33, allow_different_jacobians=True)
    assert comp["summary"]["period"] == "6"
    assert comp["summary"]["index"] == "36"
    assert comp["jacobians_match"] is False
    assert comp["coprimality"] == {"left_period": "2", "right_period": "3", "gcd": "1"}
    assert lichtenbaum_check(6, 36)
    ok, trace = verify_certificate(_roundtrip(comp))
    assert ok, trace


def test_compose_requires_matching_curves_by_default(cert22, cert33):
    with pytest.raises(InputError, match="different curves"):
        compose_coprime(cert22, cert33)


def test_compose_rejects_shared_period_factors(cert33, cert31):
    with pytest.raises(InputError, match="share a factor"):
        compose_coprime(cert33, cert31)


def test_trivial_certificate_is_identity(cert33):
    triv = make_trivial_certificate()
    ok, trace = verify_certificate(triv)
    assert ok, trace
    assert compose_coprime(triv, cert33) is cert33
    assert compose_coprime(cert33, triv) is cert33


def test_compose_rejects_non_certificates(cert33):
    with pytest.raises(InputError):
        compose_coprime(cert33, {"kind": "something"})


# ------------------------------------------------------------ verification


def test_verify_rejects_perturbed_invariant(cert33):
    mutant = _roundtrip(cert33)
    row = mutant["obstruction"]["local_rows"][2]
    row["invariant"] = "2/3" if row["invariant"] != "2/3" else "1/3"
    ok, trace = verify_certificate(mutant)
    assert not ok
    assert any("local_rows[2]" in path for path, _ in trace)


def test_verify_rejects_deleted_lower_rows(cert33):
    mutant = _roundtrip(cert33)
    mutant["index_lower"]["rows"] = []
    ok, trace = verify_certificate(mutant)
    assert not ok
    assert any("index lower bound unproven" in msg for _, msg in trace)


def test_verify_rejects_mode_flip(cert33):
    # claiming the corestriction data came from the trivial-action route
    # contradicts the recorded representation
    mutant = _roundtrip(cert33)
    mutant["context"]["mode"] = "A"
    ok, trace = verify_certificate(mutant)
    assert not ok


def test_verify_rejects_inflated_claims(cert33):
    mutant = _roundtrip(cert33)
    mutant["summary"]["index"] = "27"
    mutant["index_upper"]["claim"] = "27"
    mutant["index_lower"]["claim"] = "27"
    ok, trace = verify_certificate(mutant)
    assert not ok


def test_verify_rejects_unknown_kind():
    ok, trace = verify_certificate({"kind": "exotic"})
    assert not ok
    assert trace[0][0] == "kind"


def test_verify_rejects_extra_fields(cert33):
    mutant = _roundtrip(cert33)
    mutant["extra"] = "x"
    ok, trace = verify_certificate(mutant)
    assert not ok
    assert "unexpected" in trace[0][1]


def test_digest_pins_the_curve_block(cert33):
    mutant = _roundtrip(cert33)
    mutant["inputs"]["digest"] = "0" * 64
    ok, trace = verify_certificate(mutant)
    assert not ok
    assert any(path == "inputs.digest" for path, _ in trace)
    assert content_digest(cert33["inputs"]["curve"]) == cert33["inputs"]["digest"]


def test_canonical_json_is_stable_under_reordering(cert33):
    shuffled = json.loads(json.dumps(_roundtrip(cert33)))
    assert canonical_json(shuffled) == canonical_json(cert33)
