from .base import Group, GroupElement, invert, multiply, reduce_word
from .hnn import HNNExtension
from .products import AmalgamatedProduct, FreeProduct, free_product_norm
from .simple import RACG, CyclicGroup, FiniteGroup, FreeAbelianGroup, FreeGroup, racg_from_graph
from .spec_io import dump_spec, group_from_spec, load_group, load_spec_text
from .words import format_word, inverse_word, parse_word


def dihedral_infinite():
    """D_inf = Z/2 * Z/2 with generators s, t."""
    return FreeProduct([CyclicGroup(2, "s"), CyclicGroup(2, "t")])


def z2_star_z3():
    return FreeProduct([CyclicGroup(2, "s"), CyclicGroup(3, "t")])


def free_group_as_product(labels=("a", "b")):
    """F_n presented as Z * ... * Z."""
    return FreeProduct([FreeAbelianGroup([lab]) for lab in labels])


def trefoil():
    """<a, b | a^2 = b^3> as Z *_C Z with C = <a^2> = <b^3>."""
    return AmalgamatedProduct(
        [FreeAbelianGroup(["a"]), FreeAbelianGroup(["b"])], [["a a"], ["b b b"]]
    )


def baumslag_solitar(m=1, n=2):
    """BS(m, n) = <a, y | y a^m y^-1 = a^n>."""
    base = FreeAbelianGroup(["a"])
    return HNNExtension(base, [(("a", 1),) * m], [(("a", 1),) * n], "y")


__all__ = [
    "Group",
    "GroupElement",
    "multiply",
    "invert",
    "reduce_word",
    "HNNExtension",
    "AmalgamatedProduct",
    "FreeProduct",
    "free_product_norm",
    "RACG",
    "CyclicGroup",
    "FiniteGroup",
    "FreeAbelianGroup",
    "FreeGroup",
    "racg_from_graph",
    "dump_spec",
    "group_from_spec",
    "load_group",
    "load_spec_text",
    "format_word",
    "inverse_word",
    "parse_word",
    "dihedral_infinite",
    "z2_star_z3",
    "free_group_as_product",
    "trefoil",
    "baumslag_solitar",
]
