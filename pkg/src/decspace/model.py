"""Decision-space data model: schemas, class distributions, elements,
spaces, validation, semantic equality, and instance classification.

Distributions are stored as fractions summing to one; percentages only
appear at the JSON boundary.  All types are immutable value objects, so
concurrent reads are safe.
"""

from dataclasses import dataclass, field
from itertools import product
from typing import NamedTuple, Optional

from .geometry import Region, kernels as _k

SUM_TOL = 1e-9
EQUALITY_TOL = 1e-9


class Attribute(NamedTuple):
    name: str
    domain_min: float
    domain_max: float


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attribute list with bounded numeric domains."""

    attributes: tuple

    def __post_init__(self):
        attrs = tuple(Attribute(*a) for a in self.attributes)
        object.__setattr__(self, "attributes", attrs)
        names = [a.name for a in attrs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate attribute names in {names}")
        for a in attrs:
            if not a.domain_min < a.domain_max:
                raise ValueError(
                    f"attribute {a.name!r}: domain_min must be < domain_max"
                )

    def __len__(self):
        return len(self.attributes)

    @property
    def names(self):
        return tuple(a.name for a in self.attributes)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown attribute {name!r}") from None

    def full_region(self):
        """The whole domain as a single closed box."""
        return Region.from_box(
            *((a.domain_min, a.domain_max, True, True) for a in self.attributes)
        )


@dataclass(frozen=True)
class ClassDistribution:
    """Per-class fractions summing to one."""

    labels: tuple
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.labels) != len(self.weights):
            raise ValueError("labels and weights differ in length")

    @classmethod
    def one_hot(cls, labels, label):
        return cls(labels, tuple(1.0 if l == label else 0.0 for l in labels))

    def extended(self, labels):
        """Reorder/zero-extend onto a target label tuple."""
        if labels == self.labels:
            return self
        lookup = dict(zip(self.labels, self.weights))
        return ClassDistribution(labels, tuple(lookup.get(l, 0.0) for l in labels))

    def predicted_label(self):
        """Argmax label; ties broken by lowest label index."""
        best = 0
        for i in range(1, len(self.weights)):
            if self.weights[i] > self.weights[best]:
                best = i
        return self.labels[best]

    def close_to(self, other, tol=EQUALITY_TOL):
        if self.labels != other.labels:
            other = other.extended(self.labels)
        return all(
            abs(a - b) <= tol for a, b in zip(self.weights, other.weights)
        )

    def as_percentages(self):
        return tuple(round(w * 100.0, 6) for w in self.weights)


def specialization(region):
    """Mean projected extent of a region over all attributes: the weight of
    an element's prediction in a merge."""
    if region.is_empty:
        return 0.0
    m = region.dim
    return sum(region.projection_measure(k) for k in range(m)) / m


@dataclass(frozen=True)
class Element:
    """A rectilinear subregion plus its class-distribution vector.

    ``mass`` is the accumulated specialization weight; for a freshly built
    element it equals the specialization of the region.
    """

    region: Region
    value: ClassDistribution
    mass: float = field(default=None)

    def __post_init__(self):
        if self.region.is_empty:
            raise ValueError("element region may not be empty")
        if self.mass is None:
            object.__setattr__(self, "mass", specialization(self.region))
        elif self.mass < 0:
            raise ValueError("element mass must be >= 0")

    def contains(self, pt):
        return self.region.contains(pt)


@dataclass(frozen=True)
class DecisionSpace:
    """A schema plus a set of elements with pairwise-disjoint regions."""

    schema: AttributeSchema
    class_labels: tuple
    elements: tuple

    def __post_init__(self):
        object.__setattr__(self, "class_labels", tuple(self.class_labels))
        object.__setattr__(self, "elements", tuple(self.elements))

    @classmethod
    def empty(cls, schema, class_labels=()):
        return cls(schema, class_labels, ())

    def covered_region(self):
        cov = Region.empty()
        for e in self.elements:
            cov = cov | e.region
        return cov

    def with_labels(self, labels):
        """Extend every element's distribution onto a target label tuple."""
        if labels == self.class_labels:
            return self
        if set(self.class_labels) - set(labels):
            raise ValueError("target labels must be a superset")
        elems = tuple(
            Element(e.region, e.value.extended(labels), e.mass)
            for e in self.elements
        )
        return DecisionSpace(self.schema, labels, elems)

    def _flat_boxes(self):
        boxes, owners = [], []
        for i, e in enumerate(self.elements):
            for b in e.region.boxes:
                boxes.append(b)
                owners.append(i)
        return boxes, owners


def validate(space):
    """All Definition-level invariant violations of a space, as messages.

    Empty list iff the space is valid; violations are data, not exceptions.
    """
    out = []
    m = len(space.schema)
    domain = space.schema.full_region()
    for i, e in enumerate(space.elements):
        if e.region.is_empty:
            out.append(f"element {i}: empty region")
            continue
        if e.region.dim != m:
            out.append(
                f"element {i}: region dimension {e.region.dim} != schema {m}"
            )
            continue
        if not e.region.issubset(domain):
            out.append(f"element {i}: region exceeds attribute domains")
        if set(e.value.labels) - set(space.class_labels):
            out.append(f"element {i}: distribution over unknown classes")
        s = sum(e.value.weights)
        if abs(s - 1.0) > SUM_TOL:
            out.append(f"element {i}: distribution sums to {s:.9f}, not 1")
        if any(w < 0 or w > 1 for w in e.value.weights):
            out.append(f"element {i}: weight outside [0, 1]")
        if e.mass < 0:
            out.append(f"element {i}: negative mass")
    for i in range(len(space.elements)):
        for j in range(i + 1, len(space.elements)):
            ri = space.elements[i].region
            rj = space.elements[j].region
            if ri.is_empty or rj.is_empty:
                continue
            if _k.boxes_intersect(ri.boxes, rj.boxes):
                out.append(f"elements {i} and {j}: regions overlap")
    return out


def classify(space, instance):
    """Distribution and argmax label of the element covering ``instance``,
    or None when no element covers it."""
    instance = tuple(instance)
    if len(instance) != len(space.schema):
        raise ValueError(
            f"instance has {len(instance)} coordinates, schema {len(space.schema)}"
        )
    boxes, owners = space._flat_boxes()
    idx = _k.locate(boxes, owners, instance)
    if idx < 0:
        return None
    value = space.elements[idx].value
    return value, value.predicted_label()


def classify_many(space, instances):
    """Bulk classify; one (distribution, label) or None per instance."""
    boxes, owners = space._flat_boxes()
    out = []
    for pt in instances:
        idx = _k.locate(boxes, owners, tuple(pt))
        if idx < 0:
            out.append(None)
        else:
            value = space.elements[idx].value
            out.append((value, value.predicted_label()))
    return out


def _sample_axes(spaces):
    """Per-attribute sample coordinates for overlay comparison: midpoints of
    the cells induced by all boundary coordinates, plus the exact coordinate
    of any degenerate (point) bound."""
    schema = spaces[0].schema
    axes = []
    for k, attr in enumerate(schema.attributes):
        coords = {attr.domain_min, attr.domain_max}
        degenerate = set()
        for sp in spaces:
            for e in sp.elements:
                for b in e.region.boxes:
                    lo, hi = b[k][0], b[k][1]
                    coords.add(lo)
                    coords.add(hi)
                    if lo == hi:
                        degenerate.add(lo)
        cs = sorted(coords)
        samples = [(a + b) / 2.0 for a, b in zip(cs, cs[1:]) if a < b]
        samples.extend(sorted(degenerate))
        axes.append(samples)
    return axes


def semantically_equal(a, b, tol=EQUALITY_TOL):
    """True iff the two spaces cover the same region (up to measure zero)
    and agree on distributions within ``tol`` on every overlay cell.

    Box decomposition never affects the result.  Degenerate (point or slab)
    elements are compared at their exact coordinates.
    """
    if a.schema != b.schema:
        raise ValueError("schema mismatch")
    if set(a.class_labels) != set(b.class_labels):
        raise ValueError("class label mismatch")
    b = b.with_labels(a.class_labels) if a.class_labels != b.class_labels else b
    axes = _sample_axes((a, b))
    boxes_a, owners_a = a._flat_boxes()
    boxes_b, owners_b = b._flat_boxes()
    hits_a = _k.locate_grid(boxes_a, owners_a, axes)
    hits_b = _k.locate_grid(boxes_b, owners_b, axes)
    for ia, ib in zip(hits_a, hits_b):
        if (ia < 0) != (ib < 0):
            return False
        if ia < 0:
            continue
        va = a.elements[ia].value.weights
        vb = b.elements[ib].value.weights
        for wa, wb in zip(va, vb):
            if abs(wa - wb) > tol:
                return False
    return True


# -- JSON document round-trip ------------------------------------------------

def space_to_json(space):
    """External decision-space document; percentages rendered with six
    decimal places."""
    return {
        "schema": [
            {"name": a.name, "min": a.domain_min, "max": a.domain_max}
            for a in space.schema.attributes
        ],
        "classes": list(space.class_labels),
        "elements": [
            {
                "boxes": [
                    {
                        name: [iv[0], iv[1], bool(iv[2]), bool(iv[3])]
                        for name, iv in zip(space.schema.names, b)
                    }
                    for b in e.region.boxes
                ],
                "value": list(e.value.extended(space.class_labels).as_percentages()),
                "mass": e.mass,
            }
            for e in space.elements
        ],
    }


def space_from_json(doc):
    schema = AttributeSchema(
        tuple((a["name"], float(a["min"]), float(a["max"])) for a in doc["schema"])
    )
    labels = tuple(doc["classes"])
    elems = []
    for ed in doc["elements"]:
        boxes = []
        for bd in ed["boxes"]:
            box = []
            for name in schema.names:
                if name not in bd:
                    raise ValueError(f"box missing attribute {name!r}")
                lo, hi, lc, hc = bd[name]
                box.append((float(lo), float(hi), bool(lc), bool(hc)))
            boxes.append(tuple(box))
        weights = [float(p) / 100.0 for p in ed["value"]]
        total = sum(weights)
        # undo six-decimal percentage rounding, but let real violations show
        if weights and abs(total - 1.0) <= 1e-6 and total > 0:
            weights = [w / total for w in weights]
        elems.append(
            Element(
                Region(boxes),
                ClassDistribution(labels, weights),
                float(ed["mass"]) if ed.get("mass") is not None else None,
            )
        )
    return DecisionSpace(schema, labels, tuple(elems))
