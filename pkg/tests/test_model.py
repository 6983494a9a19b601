import json

import pytest

from eulerob import examples as ex
from eulerob.model import (
    GENERIC,
    CovectorClass,
    GermModel,
    ModelError,
    SectionData,
    build_model,
    generate_random_model,
    load_model,
    model_from_dict,
    model_to_dict,
    restrict_to_closure,
    validate_model,
)


def with_links(m, links):
    return GermModel(m.name, m.strata, m.closure, links, m.covectors)


def test_node_and_smooth_validate(node, smooth):
    for m in (node, smooth):
        report = validate_model(m)
        assert report.ok, report.failures()
        assert {c.name for c in report.checks} == {
            "base", "poset", "connected", "lk-support", "lk-diagonal",
            "sullivan", "ns-support", "duality", "covectors",
        }
    assert node.ns(GENERIC, "s0", "s1") == node.ns(GENERIC, "s0", "s2") == 1
    assert node.lk("s0", "s1") == node.lk("s0", "s2") == 0


def test_corrupted_link_fails_sullivan_at_locus(node):
    bad = with_links(node, {"s0": {"s1": 1}})
    report = validate_model(bad)
    assert not report.ok
    assert not report["sullivan"].passed
    assert "sullivan(s0,s1)" in report["sullivan"].loci


def test_lk_diagonal_must_vanish(node):
    report = validate_model(with_links(node, {"s1": {"s1": 2}}))
    assert report["lk-diagonal"].loci == ("lk-diagonal(s1)",)


def test_duality_and_support_checks(node):
    gen = node.covectors[GENERIC]
    broken = CovectorClass(
        GENERIC,
        SectionData(gen.sections.closed, {"s0": {"s1": 1, "s2": 2}}),
        gen.degenerate, gen.mult,
    )
    m = GermModel("n", node.strata, node.closure, node.links, {GENERIC: broken})
    assert validate_model(m)["duality"].loci == ("duality(generic:s0,s2)",)
    partial = CovectorClass(GENERIC, SectionData({"s0": {"s1": 1}}, {"s0": {"s1": 1}}), gen.degenerate, gen.mult)
    m = GermModel("n", node.strata, node.closure, node.links, {GENERIC: partial})
    assert "ns-support(generic:s0,s2)" in validate_model(m)["ns-support"].loci


def test_covector_wellformedness(cusp):
    assert cusp.report.ok
    gen = cusp.covectors[GENERIC]
    assert gen.degenerate == {"s0"} and gen.mult == {"s0": 1}
    dx = cusp.covectors["dx"]
    assert dx.degenerate == {"s0", "s1"}
    no_generic = GermModel("c", cusp.strata, cusp.closure, cusp.links, {"dx": dx})
    assert "covectors(missing generic)" in validate_model(no_generic)["covectors"].loci
    wide = CovectorClass(GENERIC, gen.sections, frozenset({"s0", "s1"}), {"s0": 1})
    m = GermModel("c", cusp.strata, cusp.closure, cusp.links, {GENERIC: wide})
    assert not validate_model(m)["covectors"].passed


def test_dimension_monotonicity_and_connectedness():
    m = build_model("bad", [("s0", 0), ("s1", 2), ("s2", 1), ("s3", 1)], [("s0", "s1"), ("s1", "s2")],
                    {"s0": {"s1": 1, "s2": 1}, "s1": {"s2": 1}})
    report = validate_model(m)
    assert report["poset"].loci == ("poset(s1,s2)",)
    assert report["connected"].loci == ("connected(s3)",)


def test_structural_errors():
    with pytest.raises(ModelError, match="unknown stratum 'zz'"):
        build_model("x", [("s0", 0), ("s1", 1)], [("s0", "zz")], {})
    with pytest.raises(ModelError, match="cycle"):
        build_model("x", [("s0", 0), ("s1", 1), ("s2", 2)], [("s1", "s2"), ("s2", "s1")], {})
    with pytest.raises(ModelError, match="duplicate"):
        build_model("x", [("s0", 0), ("s0", 1)], [], {})
    with pytest.raises(ModelError, match="unknown stratum 'q'"):
        build_model("x", [("s0", 0), ("s1", 1)], [("s0", "s1")], {"s0": {"q": 1}})


def test_generate_small_and_deterministic():
    m = generate_random_model(1, 1)
    assert len(m.ids) == 2 and m.report.ok
    a, b = generate_random_model(7, 5), generate_random_model(7, 5)
    assert model_to_dict(a) == model_to_dict(b)
    assert model_to_dict(generate_random_model(8, 5)) != model_to_dict(a)
    with pytest.raises(ValueError):
        generate_random_model(1, 0)


def test_generate_thousand_seeds_valid():
    for seed in range(1000):
        m = generate_random_model(seed, 1 + seed % 6)
        assert m.report.ok, (seed, m.report.failures())
        for i, k in m.strict_pairs:
            assert m.dim(i) < m.dim(k)
            assert -3 <= m.ns(GENERIC, i, k) <= 3
        for i in m.ids:
            for j in m.up(i):
                assert sum(m.lk(i, k) for k in m.up(i) if m.leq(k, j)) == 0


def test_restrict_to_closure_examples(node, umbrella):
    sub = restrict_to_closure(node, "s1")
    assert sub.ids == ("s0", "s1")
    assert sub.report.ok
    assert model_to_dict(sub)["covectors"][GENERIC]["closed"] == {"s0": {"s1": 1}}
    line = restrict_to_closure(umbrella, "s1")
    assert line.ids == ("s0", "s1") and line.ns(GENERIC, "s0", "s1") == 1
    whole = restrict_to_closure(umbrella, "s2")
    assert model_to_dict(whole) | {"name": umbrella.name} == model_to_dict(umbrella)
    with pytest.raises(KeyError):
        restrict_to_closure(node, "s9")


def test_restrict_preserves_validity():
    for seed in range(200):
        m = generate_random_model(seed, 5)
        for j in m.ids:
            assert restrict_to_closure(m, j).report.ok


def test_file_roundtrip(tmp_path, cusp):
    path = tmp_path / "cusp.json"
    path.write_text(json.dumps(model_to_dict(cusp)))
    back = load_model(path)
    assert model_to_dict(back) == model_to_dict(cusp)
    assert back.report.ok


def test_file_rejects_unknown_keys(node):
    data = model_to_dict(node)
    data["extra"] = 1
    with pytest.raises(ModelError, match="unknown key"):
        model_from_dict(data)
    data = model_to_dict(node)
    data["covectors"][GENERIC]["weight"] = 3
    with pytest.raises(ModelError, match="covectors.generic: unknown key"):
        model_from_dict(data)
    data = model_to_dict(node)
    data["strata"][1]["color"] = "red"
    with pytest.raises(ModelError, match=r"strata\[1\]"):
        model_from_dict(data)


def test_file_parse_error_locus(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "name": "x",\n  "strata": [,]\n}')
    with pytest.raises(ModelError, match="line 3"):
        load_model(path)


def test_curated_models_emit_and_reload(curated):
    m = curated.build()
    again = model_from_dict(json.loads(json.dumps(model_to_dict(m))))
    assert again.report.ok
    assert model_to_dict(again) == model_to_dict(m)
