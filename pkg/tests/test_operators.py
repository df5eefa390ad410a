import pytest

from decspace import (
    AttributeSchema,
    classify,
    ClassDistribution,
    DecisionSpace,
    Element,
    combine_values,
    intersection_report,
    merge,
    merge_nary,
    merge_streaming,
    op_barodot,
    op_plus,
    restrict,
    semantically_equal,
    strictly_subsumes,
    subsumes,
    validate,
)
from decspace.geometry import Region
from decspace.operators import intersect_with_space
from decspace.sampling import DEFAULT_SCHEMA, random_space

from conftest import check_merge_against_oracle


def elem(box_spec, weights, labels=("Yes", "No")):
    return Element(Region.from_box(*box_spec), ClassDistribution(labels, weights))


def single_space(schema, box_spec, weights, labels=("Yes", "No")):
    return DecisionSpace(schema, labels, (elem(box_spec, weights, labels),))


@pytest.fixture
def schema():
    return DEFAULT_SCHEMA


class TestSubsumption:
    def test_strict_containment(self):
        y = elem(((1, 2, True, False), (1, 2, True, False)), (1.0, 0.0))
        x = elem(((0, 4, True, False), (0, 4, True, False)), (1.0, 0.0))
        assert subsumes(x, y)
        assert strictly_subsumes(x, y)
        assert not subsumes(y, x)

    def test_self_subsumption_is_not_strict(self):
        x = elem(((0, 4, True, False), (0, 4, True, False)), (1.0, 0.0))
        assert subsumes(x, x)
        assert not strictly_subsumes(x, x)

    def test_shared_endpoint_is_not_strict(self):
        y = elem(((0, 2, True, False), (1, 2, True, False)), (1.0, 0.0))
        x = elem(((0, 4, True, False), (0, 4, True, False)), (1.0, 0.0))
        assert subsumes(x, y)
        assert not strictly_subsumes(x, y)  # equal lower endpoint on attr 0


class TestIntersectWithSpace:
    def test_disjoint(self, schema):
        x = elem(((0, 2, True, False), (0, 2, True, False)), (1.0, 0.0))
        other = single_space(schema, ((4, 6, True, False), (4, 6, True, False)), (0.0, 1.0))
        assert intersect_with_space(x, other) == []

    def test_single_conflict(self, overlap_pair):
        grey, checker = overlap_pair
        hits = intersect_with_space(grey.elements[0], checker)
        assert hits == [checker.elements[0]]

    def test_face_touch_is_not_a_conflict(self, schema):
        x = elem(((0, 2, True, True), (0, 2, True, True)), (1.0, 0.0))
        other = single_space(schema, ((2, 4, True, True), (0, 2, True, True)), (0.0, 1.0))
        assert intersect_with_space(x, other) == []

    def test_report_remainders_disjoint_from_shared(self, overlap_pair):
        grey, checker = overlap_pair
        rep = intersection_report(grey, checker)
        assert len(rep.pairs) == 1
        _, _, shared = rep.pairs[0]
        assert (rep.x_remainders[0] & shared).is_empty
        assert (rep.y_remainders[0] & shared).is_empty


class TestCombineValues:
    def test_weighted_average(self):
        v1 = ClassDistribution(("Yes", "No"), (0.4, 0.6))
        v2 = ClassDistribution(("Yes", "No"), (0.0, 1.0))
        got = combine_values([v1, v2], [7.5, 6.5])
        assert got.weights[0] == pytest.approx(3.0 / 14.0)
        assert sum(got.weights) == pytest.approx(1.0, abs=1e-9)

    def test_equal_values_fixed_point(self):
        v = ClassDistribution(("Yes", "No"), (0.3, 0.7))
        got = combine_values([v, v, v], [1.0, 2.0, 5.0])
        assert got.weights == pytest.approx(v.weights)

    def test_three_way_matches_direct_formula(self):
        vs = [
            ClassDistribution(("A", "B"), (1.0, 0.0)),
            ClassDistribution(("A", "B"), (0.0, 1.0)),
            ClassDistribution(("A", "B"), (0.5, 0.5)),
        ]
        got = combine_values(vs, [1.0, 1.0, 2.0])
        assert got.weights == pytest.approx((0.5, 0.5))

    def test_all_zero_masses_error(self):
        v = ClassDistribution(("A",), (1.0,))
        with pytest.raises(ValueError):
            combine_values([v, v], [0.0, 0.0])

    def test_length_mismatch(self):
        v = ClassDistribution(("A",), (1.0,))
        with pytest.raises(ValueError):
            combine_values([v], [1.0, 2.0])


class TestMerge:
    def test_overlapping_pair_intersection_value(self, overlap_pair):
        grey, checker = overlap_pair
        merged = merge(grey, checker)
        assert validate(merged) == []
        dist, label = classify(merged, (7.5, 5.0))  # inside the shared region
        assert dist.weights[0] == pytest.approx(3.0 / 14.0, abs=1e-12)
        assert label == "No"
        # remainders keep their original values
        assert classify(merged, (7.5, 12.0))[0].weights == pytest.approx((0.4, 0.6))
        assert classify(merged, (4.0, 5.0))[0].weights == pytest.approx((0.0, 1.0))

    def test_intersection_element_mass_accumulates(self, overlap_pair):
        grey, checker = overlap_pair
        merged = merge(grey, checker)
        inter = [e for e in merged.elements if e.region.contains((7.5, 5.0))]
        assert len(inter) == 1
        assert inter[0].mass == pytest.approx(7.5 + 6.5)

    def test_identity(self, rng, schema):
        for _ in range(5):
            x = random_space(rng, schema)
            empty = DecisionSpace.empty(schema, x.class_labels)
            assert semantically_equal(merge(x, empty), x)
            assert semantically_equal(merge(empty, x), x)

    def test_idempotent(self, rng, schema):
        for _ in range(5):
            x = random_space(rng, schema)
            assert semantically_equal(merge(x, x), x)

    def test_commutative(self, rng, schema):
        for _ in range(10):
            x, y = random_space(rng, schema), random_space(rng, schema)
            assert semantically_equal(merge(x, y), merge(y, x))

    def test_outputs_validate(self, rng, schema):
        for _ in range(10):
            x, y = random_space(rng, schema), random_space(rng, schema)
            assert validate(merge(x, y)) == []

    def test_matches_cellwise_oracle(self, rng, schema):
        for _ in range(25):
            x, y = random_space(rng, schema), random_space(rng, schema)
            check_merge_against_oracle(x, y, merge(x, y))

    def test_strictly_subsumed_equal_value_dropped(self, schema):
        labels = ("Yes", "No")
        inner = single_space(schema, ((2, 3, True, False), (2, 3, True, False)), (1.0, 0.0))
        outer = single_space(schema, ((0, 8, True, False), (0, 8, True, False)), (1.0, 0.0))
        merged = merge(inner, outer)
        assert len(merged.elements) == 1
        assert semantically_equal(merged, outer)

    def test_class_labels_reconciled(self, schema):
        a = single_space(schema, ((0, 4, True, False), (0, 8, True, False)),
                         (1.0,), labels=("Yes",))
        b = single_space(schema, ((4, 8, True, False), (0, 8, True, False)),
                         (1.0,), labels=("No",))
        merged = merge(a, b)
        assert merged.class_labels == ("No", "Yes")
        assert validate(merged) == []

    def test_schema_mismatch(self, schema):
        other = AttributeSchema((("b0", 0.0, 8.0), ("b1", 0.0, 8.0)))
        x = single_space(schema, ((0, 1, True, False), (0, 1, True, False)), (1.0, 0.0))
        y = single_space(other, ((0, 1, True, False), (0, 1, True, False)), (1.0, 0.0))
        with pytest.raises(ValueError):
            merge(x, y)

    def test_coincident_points_average_unweighted(self, schema):
        labels = ("Yes", "No")
        p1 = single_space(schema, ((2, 2, True, True), (2, 2, True, True)), (1.0, 0.0))
        p2 = single_space(schema, ((2, 2, True, True), (2, 2, True, True)), (0.0, 1.0))
        merged = merge(p1, p2)
        assert len(merged.elements) == 1
        assert merged.elements[0].value.weights == pytest.approx((0.5, 0.5))


class TestNaryAndStreaming:
    def test_singleton(self, rng, schema):
        x = random_space(rng, schema)
        assert semantically_equal(merge_nary([x]), x)
        assert semantically_equal(merge_streaming(x, DecisionSpace.empty(schema, x.class_labels)), x)

    def test_binary_case_equals_merge(self, rng, schema):
        for _ in range(10):
            x, y = random_space(rng, schema), random_space(rng, schema)
            assert semantically_equal(merge_nary([x, y]), merge(x, y))

    def test_equal_mass_full_domain_quarters(self, schema):
        labels = ("A", "B", "C", "D")
        spaces = [
            DecisionSpace(schema, labels, (Element(
                schema.full_region(),
                ClassDistribution.one_hot(labels, labels[i]),
            ),))
            for i in range(4)
        ]
        merged = merge_nary(spaces)
        assert len(merged.elements) == 1
        assert merged.elements[0].value.weights == pytest.approx((0.25,) * 4)

    def test_empty_list_rejected(self):
        with pytest.raises(ValueError):
            merge_nary([])

    def test_streaming_fold_equals_nary(self, rng, schema):
        for _ in range(10):
            spaces = [random_space(rng, schema) for _ in range(4)]
            acc = spaces[0]
            for sp in spaces[1:]:
                acc = merge_streaming(acc, sp)
            assert semantically_equal(acc, merge_nary(spaces))

    def test_first_streaming_step_is_plain_merge(self, rng, schema):
        x, y = random_space(rng, schema), random_space(rng, schema)
        assert semantically_equal(merge_streaming(x, y), merge(x, y))


class TestRestrict:
    def test_self_restriction_is_identity(self, rng, schema):
        for _ in range(5):
            x = random_space(rng, schema, coverage=0.7)
            r = restrict(x, x)
            assert r.elements == x.elements

    def test_full_domain_identity_any_value(self, rng, schema):
        x = random_space(rng, schema, coverage=0.7)
        for w in ((1.0, 0.0), (0.25, 0.75)):
            full = single_space(schema, tuple(
                (a.domain_min, a.domain_max, True, True) for a in schema.attributes
            ), w)
            assert semantically_equal(restrict(x, full), x)

    def test_half_domain_trims_regions(self, schema):
        x = single_space(schema, ((0, 8, True, False), (0, 8, True, False)), (0.3, 0.7))
        half = single_space(schema, ((0, 4, True, False), (0, 8, True, False)), (1.0, 0.0))
        got = restrict(x, half)
        assert len(got.elements) == 1
        assert got.elements[0].region == half.elements[0].region
        assert got.elements[0].value.weights == (0.3, 0.7)
        assert got.elements[0].mass == x.elements[0].mass  # mass preserved

    def test_disjoint_footprints_empty(self, schema):
        x = single_space(schema, ((0, 2, True, False), (0, 2, True, False)), (1.0, 0.0))
        y = single_space(schema, ((4, 6, True, False), (4, 6, True, False)), (1.0, 0.0))
        assert restrict(x, y).elements == ()

    def test_associative(self, rng, schema):
        for _ in range(10):
            x = random_space(rng, schema, coverage=0.7)
            y = random_space(rng, schema, coverage=0.7)
            z = random_space(rng, schema, coverage=0.7)
            assert semantically_equal(
                restrict(restrict(x, y), z), restrict(x, restrict(y, z))
            )


class TestComposites:
    def test_plus_identical_footprint_equals_merge(self, rng, schema):
        for _ in range(5):
            x, y = random_space(rng, schema), random_space(rng, schema)
            assert semantically_equal(op_plus(x, y), merge(x, y))

    def test_plus_disjoint_footprints_empty(self, schema):
        x = single_space(schema, ((0, 2, True, False), (0, 2, True, False)), (1.0, 0.0))
        y = single_space(schema, ((4, 6, True, False), (4, 6, True, False)), (1.0, 0.0))
        assert op_plus(x, y).elements == ()
        assert op_barodot(x, y).elements == ()

    def test_plus_equals_step_by_step_composition(self, rng, schema):
        for _ in range(5):
            x = random_space(rng, schema, coverage=0.7)
            y = random_space(rng, schema, coverage=0.7)
            assert semantically_equal(
                op_plus(x, y), restrict(restrict(merge(x, y), x), y)
            )
            assert semantically_equal(
                op_barodot(x, y), merge(restrict(x, y), restrict(y, x))
            )

    def test_idempotent(self, rng, schema):
        for _ in range(5):
            x = random_space(rng, schema, coverage=0.7)
            assert semantically_equal(op_plus(x, x), x)
            assert semantically_equal(op_barodot(x, x), x)
