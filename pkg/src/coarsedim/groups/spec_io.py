"""Load and dump group specs.

Specs are nested mappings (YAML or JSON text).  Schema keys:

``kind``
    one of ``cyclic``, ``finite``, ``free_abelian``, ``free``,
    ``free_product``, ``amalgam``, ``hnn``, ``racg``
``generators``
    generator labels (``cyclic``, ``free_abelian``, ``free``); a
    ``{label: index}`` map for ``finite``
``order`` / ``table``
    for ``cyclic`` / ``finite``
``factors``
    list of sub-specs (``free_product``, ``amalgam``)
``subgroup``
    ``{gens_in_A: [...], gens_in_B: [...]}`` for a two-factor amalgam,
    ``{gens_in: [[...], ...]}`` for more factors
``base``, ``stable_letter``, ``phi``
    for ``hnn``: ``phi`` maps each subgroup generator word to its image word
``graph``
    ``{vertices: [...], edges: [[s, t], ...]}`` for ``racg``
"""

import json

import yaml

from ..errors import SpecError
from .hnn import HNNExtension
from .products import AmalgamatedProduct, FreeProduct
from .simple import RACG, CyclicGroup, FiniteGroup, FreeAbelianGroup, FreeGroup


def _need(spec, key):
    try:
        return spec[key]
    except (KeyError, TypeError):
        raise SpecError(f"spec of kind {spec.get('kind')!r} is missing {key!r}") from None


def group_from_spec(spec):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise SpecError("a group spec must be a mapping with a 'kind' key")
    kind = spec["kind"].replace("-", "_")
    if kind == "cyclic":
        gens = spec.get("generators", ["s"])
        return CyclicGroup(int(_need(spec, "order")), gens[0])
    if kind in ("finite", "finite_table"):
        return FiniteGroup(_need(spec, "table"), _need(spec, "generators"))
    if kind == "free_abelian":
        return FreeAbelianGroup(_need(spec, "generators"))
    if kind == "free":
        return FreeGroup(_need(spec, "generators"))
    if kind == "free_product":
        return FreeProduct([group_from_spec(f) for f in _need(spec, "factors")])
    if kind == "amalgam":
        factors = [group_from_spec(f) for f in _need(spec, "factors")]
        sub = spec.get("subgroup") or {}
        if "gens_in" in sub:
            words = sub["gens_in"]
        elif len(factors) == 2:
            words = [sub.get("gens_in_A", []), sub.get("gens_in_B", [])]
        else:
            raise SpecError("amalgams of more than two factors need subgroup.gens_in")
        return AmalgamatedProduct(factors, words)
    if kind == "hnn":
        base = group_from_spec(_need(spec, "base"))
        phi = _need(spec, "phi")
        return HNNExtension(base, list(phi.keys()), list(phi.values()), spec.get("stable_letter", "y"))
    if kind == "racg":
        graph = _need(spec, "graph")
        return RACG(_need(graph, "vertices"), [tuple(e) for e in graph.get("edges", [])])
    raise SpecError(f"unknown group kind {spec['kind']!r}")


def load_spec_text(text):
    data = yaml.safe_load(text)
    if isinstance(data, dict) and "group" in data and "kind" not in data:
        data = data["group"]
    return data


def load_group(path):
    with open(path) as fh:
        return group_from_spec(load_spec_text(fh.read()))


def dump_spec(group):
    """Canonical text form: sorted-key JSON, two-space indent, trailing newline."""
    return json.dumps(group.to_spec(), indent=2, sort_keys=True) + "\n"


def cyclic(order, label="s"):
    return CyclicGroup(order, label)


def free_product(*factors):
    return FreeProduct(factors)
