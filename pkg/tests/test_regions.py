import pytest

from cifc.channel import random_channel
from cifc.errors import FactorizationViolation, NotApplicable, UnknownSchema, UnknownVariable
from cifc.probability import (
    chain,
    extend_through_channel,
    mi,
    mutual_information,
    sample_factored,
)
from cifc.regions import (
    SCHEMA_IDS,
    LinearRateConstraint,
    builtin_schema,
    catalog_manifest,
    droppable_constraints,
    instantiate,
    maric_merged,
    same_system,
    schema_manifest,
)

EXPECTED_SHAPES = {
    # schema id -> (constraints, rate variables)
    "RTD": (11, 8),
    "RTD_IN": (9, 6),
    "DMT_OUT": (9, 6),
    "CC": (5, 2),
    "CCP": (8, 7),
    "RTD_CC": (9, 7),
    "JIANG": (10, 6),
    "RTD_JIANG": (8, 6),
    "MARIC": (5, 2),
}


@pytest.mark.parametrize("sid", SCHEMA_IDS)
def test_schema_shapes(sid):
    schema = builtin_schema(sid)
    n_con, n_rate = EXPECTED_SHAPES[sid]
    assert len(schema.constraints) == n_con
    assert len(schema.rate_vars) == n_rate
    assert len(set(schema.labels())) == n_con


def test_rtd_labels_and_senses():
    rtd = builtin_schema("RTD")
    assert rtd.labels() == ("1a", "1b", "1c", "1d", "1e", "1f", "1g", "1h", "1i", "1j", "1k")
    senses = [c.sense for c in rtd.constraints]
    assert senses[:3] == ["GE"] * 3 and senses[3:] == ["LE"] * 8
    assert rtd.projection_coeffs("R1") == {"R1c": 1, "R1pb": 1}
    assert rtd.projection_coeffs("R2") == {"R2c": 1, "R2pa": 1, "R2pb": 1}


def test_cc_has_coefficient_two_on_r2():
    cc = builtin_schema("CC")
    two = [c for c in cc.constraints if c.coeff("R2") == 2]
    assert len(two) == 1 and two[0].label == "41"


def test_rtd_jiang_pins():
    uj = builtin_schema("RTD_JIANG")
    pins = dict(uj.pinned)
    assert pins["R2pb"] == "0"
    assert pins["R1c'"] == "I(U1c;X2|U2c)"
    names = uj.rate_names()
    assert "R2pb" not in names and "R1c'" not in names


def test_unknown_schema():
    with pytest.raises(UnknownSchema):
        builtin_schema("HK")


def test_constraint_requires_nonzero_coeff():
    with pytest.raises(ValueError):
        LinearRateConstraint((), "LE", mi("A", "B"), "x")


# -- droppable constraints ----------------------------------------------------


def test_droppable_full_mapping():
    rtd = builtin_schema("RTD")
    labels = rtd.labels()

    def drop(zeroed):
        return {labels[i] for i in droppable_constraints(rtd, zeroed)}

    assert drop({"R2c", "R2pa", "R2pb", "R2pb'"}) == {"1d", "1e", "1g"}
    assert drop({"R2pa", "R2pb", "R2pb'"}) == {"1e", "1g"}
    assert drop({"R2pb", "R2pb'"}) == {"1g"}
    assert drop({"R1c", "R1c'", "R1pb", "R1pb'"}) == {"1i"}
    assert drop(set()) == set()
    assert drop({"R2pb"}) == set()


def test_droppable_other_schema_rejected():
    with pytest.raises(NotApplicable):
        droppable_constraints(builtin_schema("CC"), {"R1"})


# -- instantiation -------------------------------------------------------------


from helpers import degenerate_rtd_distribution, square_assignment


def test_instantiate_degenerate_all_rhs_zero():
    rtd = builtin_schema("RTD")
    inst = instantiate(rtd, degenerate_rtd_distribution())
    assert all(r.rhs == 0.0 for r in inst.rows)


def test_instantiate_orthogonal_assignment_admits_one_one():
    rtd = builtin_schema("RTD")
    inst = instantiate(rtd, square_assignment())
    # R1pb = R2pa = 1, everything else 0 satisfies all rows
    rates = {"R1pb": 1.0, "R2pa": 1.0}
    for row in inst.rows:
        lhs = sum(c * rates.get(n, 0.0) for n, c in row.coeffs)
        if row.sense == "LE":
            assert lhs <= row.rhs + 1e-9, row.label
        else:
            assert lhs >= row.rhs - 1e-9, row.label


def test_instantiate_rhs_matches_direct_mi():
    rtd = builtin_schema("RTD")
    d = sample_factored(rtd.rv_set(2), rtd.factorization, 13)
    d = extend_through_channel(d, random_channel(13))
    inst = instantiate(rtd, d)
    assert inst.rhs("1a") == pytest.approx(
        mutual_information(d, mi("U1c", "X2", "U2c")), abs=1e-15
    )
    assert inst.rhs("1k") == pytest.approx(
        mutual_information(d, mi("Y1", "U1pb", "U1c U2c")), abs=1e-15
    )


def test_instantiate_missing_variable():
    rtd = builtin_schema("RTD")
    d = sample_factored(rtd.rv_set(2), rtd.factorization, 13)  # no channel outputs
    with pytest.raises(UnknownVariable):
        instantiate(rtd, d)


def test_instantiate_rejects_factorization_violation():
    schema = builtin_schema("RTD_IN")
    rvs = schema.rv_set(2)
    # fully correlated joint breaks U1c independent of U2c given X2
    general = sample_factored(
        rvs,
        # chain with no independence at all
        chain(
            ("U2c",), ("X2", "U2c"), ("U1c", "U2c X2"), ("U1pb", "U2c X2 U1c"),
            ("X1", "U2c X2 U1c U1pb"),
        ),
        seed=2,
    )
    d = extend_through_channel(general, random_channel(2))
    with pytest.raises(FactorizationViolation):
        instantiate(schema, d)


def test_instantiate_checks_determinism():
    ccp = builtin_schema("CCP")
    rvs = ccp.rv_set(2)
    free = chain(
        ("U2c",), ("U1c", "U2c"), ("U1pb U2pb", "U2c U1c"), ("X2", "U2c"),
        ("X1", "U2c U1c U1pb U2pb X2"),
    )
    d = sample_factored(rvs, free, 4)  # X2|U2c stochastic, not a copy
    d = extend_through_channel(d, random_channel(4))
    with pytest.raises(FactorizationViolation):
        instantiate(ccp, d)


# -- pin/drop/system comparison ------------------------------------------------


def test_pin_and_drop():
    rtd = builtin_schema("RTD")
    inst = instantiate(rtd, square_assignment())
    pinned = inst.pin({"R2pb": 0.0, "R2pb'": 0.0})
    assert "R2pb" not in pinned.rate_vars
    for row in pinned.rows:
        assert all(n not in ("R2pb", "R2pb'") for n, _ in row.coeffs)
    dropped = pinned.drop("1g")
    assert len(dropped.rows) == len(pinned.rows) - 1
    with pytest.raises(KeyError):
        dropped.rhs("1g")


def test_pin_shifts_rhs():
    rtd = builtin_schema("RTD")
    inst = instantiate(rtd, square_assignment())
    pinned = inst.pin({"R2pa": 0.25})
    assert pinned.rhs("1f") == pytest.approx(inst.rhs("1f") - 0.25, abs=1e-12)


def test_same_system_detects_rhs_change():
    rtd = builtin_schema("RTD")
    a = instantiate(rtd, square_assignment())
    assert same_system(a, a)
    b = a.pin({})  # copy
    rows = list(b.rows)
    from cifc.regions import NumericConstraint

    rows[0] = NumericConstraint(rows[0].coeffs, rows[0].sense, rows[0].rhs + 1e-6, rows[0].label)
    from cifc.regions import InstantiatedRegion

    b2 = InstantiatedRegion(b.schema_id, b.rate_vars, tuple(rows), b.projection)
    assert not same_system(a, b2)


# -- merged comparator forms ---------------------------------------------------


def test_maric_merged_rewrites_first_bound_only():
    base = builtin_schema("MARIC")
    merged = maric_merged()
    assert merged.labels() == ("m1'", "m2'", "m3'", "m4'", "m5'")
    for lab in ("m2", "m3", "m4", "m5"):
        assert str(merged.constraint(lab + "'").rhs) == str(base.constraint(lab).rhs)
    assert "X2a,X2b" in str(merged.constraint("m1'").rhs).replace("U1c,", "")


def test_rv_set_defaults_and_overrides():
    mar = builtin_schema("MARIC")
    rvs = mar.rv_set(2)
    assert rvs.size("Q") == 1
    assert rvs.size("X2") == 4  # pair of two binary parts
    rvs3 = mar.rv_set(2, overrides={"Q": 3})
    assert rvs3.size("Q") == 3
    ccp = builtin_schema("CCP")
    assert ccp.rv_set(2).size("X2") == 2  # copy of U2c


# -- manifest -------------------------------------------------------------------


def test_manifest_covers_every_constraint():
    man = catalog_manifest()
    assert set(man) == set(SCHEMA_IDS)
    for sid, entry in man.items():
        schema = builtin_schema(sid)
        labels = [c["label"] for c in entry["constraints"]]
        assert labels == list(schema.labels())
        for c in entry["constraints"]:
            assert c["rhs"], f"{sid}/{c['label']}: empty rhs"
            assert c["sense"] in ("LE", "GE")
            assert c["lhs"]


def test_manifest_rtd_projection_and_roles():
    man = schema_manifest(builtin_schema("RTD"))
    assert man["projection"]["R1"] == {"R1c": 1, "R1pb": 1}
    roles = {rv["name"]: rv["role"] for rv in man["rate_variables"]}
    assert roles["R1c'"] == "binning" and roles["R2pa"] == "message"


def test_manifest_dmt_out_keeps_superseded_variants():
    man = schema_manifest(builtin_schema("DMT_OUT"))
    assert "superseded_variants" in man
    assert len(man["superseded_variants"]["e23-e29 pre-insertion"]) == 9


def test_manifest_matches_checked_in_audit_copy():
    """The transcription audit: regenerating the manifest must reproduce the
    checked-in copy byte for byte (labels, coefficients, senses, rhs)."""
    import json
    from pathlib import Path

    frozen = json.loads((Path(__file__).parent / "data" / "manifest.json").read_text())
    assert catalog_manifest() == frozen
