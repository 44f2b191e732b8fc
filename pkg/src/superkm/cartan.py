"""Super Cartan data, weights, and root-lattice arithmetic.

A weight is identified with its tuple of pairings (<h_i, lambda>)_{i in I};
every quantity in this library depends on the weight only through that
tuple, so degenerate Cartan matrices conflate distinct weights by design.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

Weight = tuple[int, ...]
RootVector = tuple[int, ...]


@dataclass(frozen=True)
class IndexData:
    name: str
    parity: int  # 0 even, 1 odd
    d: int  # symmetrizer d_i > 0


@dataclass(frozen=True)
class SuperCartanDatum:
    """Index set with parities, matrix d (d_ii = -2), and parameters.

    ``d[i][j]`` stores the negated Cartan matrix entry d_ij, so d_ii = -2 and
    d_ij >= 0 off the diagonal.  ``t`` maps ordered index pairs to units,
    ``s`` maps (i, j, p, q) to the sparse parameters, and ``c`` holds the
    base normalization scalar per index at the reference weight (used only
    by validation; the recursion c_{lambda+alpha_j;i} = t_ij c_{lambda;i}
    defines all others and no in-scope value consumes them).
    """

    indices: tuple[IndexData, ...]
    d: tuple[tuple[int, ...], ...]
    t: tuple[tuple[int, int, Fraction], ...] = ()
    s: tuple[tuple[int, int, int, int, Fraction], ...] = ()
    c: tuple[Fraction, ...] = ()
    bar_consistent: bool = False
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.indices)

    def index_of(self, name: str) -> int:
        for k, ix in enumerate(self.indices):
            if ix.name == name:
                return k
        raise KeyError(f"unknown index {name!r}")

    def parity(self, i: int) -> int:
        return self.indices[i].parity % 2

    def d_i(self, i: int) -> int:
        return self.indices[i].d

    def d_ij(self, i: int, j: int) -> int:
        return self.d[i][j]

    def t_ij(self, i: int, j: int) -> Fraction:
        for a, b, v in self.t:
            if (a, b) == (i, j):
                return v
        return Fraction(1)

    def s_ij(self, i: int, j: int, p: int, q: int) -> Fraction:
        for a, b, pp, qq, v in self.s:
            if (a, b, p, q) == (i, j, pp, qq):
                return v
        return Fraction(0)

    def c_i(self, i: int) -> Fraction:
        if self.c:
            return self.c[i]
        return Fraction(1)

    def alpha(self, i: int) -> RootVector:
        return tuple(1 if k == i else 0 for k in range(self.rank))

    def zero_weight(self) -> Weight:
        return (0,) * self.rank


def validate_datum(datum: SuperCartanDatum) -> list[str]:
    """Check every constraint; return the list of violations (empty = valid)."""
    out: list[str] = []
    n = datum.rank
    if len(datum.d) != n or any(len(row) != n for row in datum.d):
        return [f"matrix-shape: d must be {n}x{n}"]
    for ix in datum.indices:
        if ix.d <= 0:
            out.append(f"symmetrizer: d_{ix.name} must be a positive integer")
    for i in range(n):
        if datum.d[i][i] != -2:
            out.append(f"cartan-diagonal: d_{{{i}{i}}} must be -2")
        for j in range(n):
            if i != j and datum.d[i][j] < 0:
                out.append(f"cartan-offdiagonal: d_{{{i}{j}}} must be >= 0")
            if i != j and (datum.d[i][j] == 0) != (datum.d[j][i] == 0):
                out.append(f"cartan-zero-symmetry: d_{{{i}{j}}}=0 iff d_{{{j}{i}}}=0")
            if datum.d_i(i) * datum.d[i][j] != datum.d_i(j) * datum.d[j][i]:
                out.append(f"symmetrizability: d_i d_{{{i}{j}}} = d_j d_{{{j}{i}}}")
            if datum.parity(i) == 1 and i != j and datum.d[i][j] % 2 != 0:
                out.append(f"(a1): |{datum.indices[i].name}|=1 requires even d_{{{i}{j}}}")
    for i in range(n):
        if datum.t_ij(i, i) != 1:
            out.append(f"(a2): t_{{{i}{i}}} must be 1")
        for j in range(n):
            if i != j and datum.d[i][j] == 0 and datum.t_ij(i, j) != datum.t_ij(j, i):
                out.append(f"(a2): d_{{{i}{j}}}=0 requires t_{{{i}{j}}}=t_{{{j}{i}}}")
    for (i, j, p, q, v) in datum.s:
        if not (0 < p < datum.d_ij(i, j) and 0 < q < datum.d_ij(j, i)):
            out.append(f"s-range: s_{{{i}{j}}}^{{{p}{q}}} outside 0<p<d_ij, 0<q<d_ji")
        if v != datum.s_ij(j, i, q, p):
            out.append(f"(a3): s_{{{i}{j}}}^{{{p}{q}}} = s_{{{j}{i}}}^{{{q}{p}}}")
        if (p * datum.parity(i)) % 2 == 1 and v != 0:
            out.append(f"(a3): p|i| odd forces s_{{{i}{j}}}^{{{p}{q}}} = 0")
        if v != 0 and p * datum.d_ij(j, i) + q * datum.d_ij(i, j) != datum.d_ij(i, j) * datum.d_ij(j, i):
            out.append(f"(hc): s_{{{i}{j}}}^{{{p}{q}}} violates homogeneity")
    if datum.c and len(datum.c) != n:
        out.append("c-length: one base scalar per index")
    for i, v in enumerate(datum.c):
        if v == 0:
            out.append(f"(a4): c base scalar for index {i} must be a unit")
    if datum.bar_consistent:
        for ix in datum.indices:
            if ix.d % 2 != ix.parity % 2:
                out.append(f"barconsistency: d_{ix.name} == |{ix.name}| (mod 2) fails")
    return out


def pairing_shift(datum: SuperCartanDatum, lam: Weight, v: RootVector) -> Weight:
    """<h_i, lam + v> = <h_i, lam> - sum_j v_j d_ij."""
    return tuple(
        lam[i] - sum(v[j] * datum.d[i][j] for j in range(datum.rank))
        for i in range(datum.rank)
    )


def parity_i_lambda(datum: SuperCartanDatum, i: int, lam: Weight) -> int:
    """|i, lambda| = |i| (<h_i, lambda> + 1) mod 2."""
    return (datum.parity(i) * (lam[i] + 1)) % 2


def root_form(datum: SuperCartanDatum, a: RootVector, b: RootVector) -> int:
    """Bilinear extension of (alpha_i, alpha_j) = -d_i d_ij."""
    total = 0
    for i in range(datum.rank):
        if not a[i]:
            continue
        for j in range(datum.rank):
            if b[j]:
                total += -datum.d_i(i) * datum.d[i][j] * a[i] * b[j]
    return total


def add_roots(a: RootVector, b: RootVector) -> RootVector:
    return tuple(x + y for x, y in zip(a, b))


def negate_root(a: RootVector) -> RootVector:
    return tuple(-x for x in a)


# ---------------------------------------------------------------------------
# Presets and the JSON datum format.

_DATUM_KEYS = {"indices", "d", "t", "s", "bar_consistent", "c", "name"}
_INDEX_KEYS = {"name", "parity", "d_i"}


def datum_from_dict(data: dict) -> SuperCartanDatum:
    unknown = set(data) - _DATUM_KEYS
    if unknown:
        raise ValueError(f"unknown datum keys: {sorted(unknown)}")
    indices = []
    names = []
    for entry in data["indices"]:
        bad = set(entry) - _INDEX_KEYS
        if bad:
            raise ValueError(f"unknown index keys: {sorted(bad)}")
        indices.append(IndexData(entry["name"], int(entry["parity"]), int(entry["d_i"])))
        names.append(entry["name"])
    if len(set(names)) != len(names):
        raise ValueError("duplicate index names")
    d = tuple(tuple(int(x) for x in row) for row in data["d"])
    t = []
    for key, val in data.get("t", {}).items():
        a, b = key.split(",")
        t.append((names.index(a), names.index(b), Fraction(val)))
    s = []
    for entry in data.get("s", []):
        s.append(
            (
                names.index(entry["i"]),
                names.index(entry["j"]),
                int(entry["p"]),
                int(entry["q"]),
                Fraction(entry["value"]),
            )
        )
    c = tuple(Fraction(x) for x in data.get("c", []))
    return SuperCartanDatum(
        indices=tuple(indices),
        d=d,
        t=tuple(t),
        s=tuple(s),
        c=c,
        bar_consistent=bool(data.get("bar_consistent", False)),
        name=str(data.get("name", "")),
    )


def load_datum(path_or_name: str) -> SuperCartanDatum:
    """Load a datum JSON file, falling back to a packaged preset name."""
    import os

    if os.path.exists(path_or_name):
        with open(path_or_name, "r", encoding="utf-8") as fh:
            return datum_from_dict(json.load(fh))
    base = os.path.basename(path_or_name)
    if base.endswith(".json"):
        base = base[: -len(".json")]
    try:
        text = resources.files("superkm.data.presets").joinpath(f"{base}.json").read_text()
    except (FileNotFoundError, ModuleNotFoundError):
        raise FileNotFoundError(f"no datum file or preset named {path_or_name!r}")
    return datum_from_dict(json.loads(text))


def preset(name: str) -> SuperCartanDatum:
    return load_datum(name)


PRESET_NAMES = ("odd-sl2", "odd-b2", "sl3")
