"""The idempotented covering quantum group: signed words, normal ordering,
the symmetries omega/psi/rho/star/shriek, and the sesquilinear form.

A signed word stores its letters in visual order, leftmost first; the
rightmost letter acts first on the anchor weight.  An up letter at index i
raises the running weight by alpha_i, a down letter lowers it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cartan import SuperCartanDatum, Weight, RootVector, pairing_shift, parity_i_lambda
from .halfquantum import f_form
from .scalars import ONE, ZERO, PiScalar, q_power, qpi_factorial, qpi_int, qpi_monomial

UP = 1
DOWN = -1

Letter = tuple[int, int]  # (direction, index)

_wform_cache: dict = {}


def clear_caches() -> None:
    _wform_cache.clear()


@dataclass(frozen=True)
class SignedWord:
    letters: tuple[Letter, ...]
    anchor: Weight

    def __len__(self) -> int:
        return len(self.letters)


def wt(datum: SuperCartanDatum, a: SignedWord | tuple[Letter, ...]) -> RootVector:
    letters = a.letters if isinstance(a, SignedWord) else a
    v = [0] * datum.rank
    for direction, i in letters:
        v[i] += direction
    return tuple(v)


def target_weight(datum: SuperCartanDatum, a: SignedWord) -> Weight:
    return pairing_shift(datum, a.anchor, wt(datum, a))


def local_weight(datum: SuperCartanDatum, a: SignedWord, p: int) -> Weight:
    """Weight the letter at visual position p acts on: anchor shifted by
    everything strictly to its right."""
    return pairing_shift(datum, a.anchor, wt(datum, a.letters[p + 1 :]))


class UExpression:
    """Finite linear combination of signed words sharing anchor and weight."""

    def __init__(self, terms: dict[SignedWord, PiScalar] | None = None):
        self.terms: dict[SignedWord, PiScalar] = {}
        if terms:
            for w, c in terms.items():
                self.add_term(w, c)

    @staticmethod
    def word(letters, anchor: Weight, coeff: PiScalar = ONE) -> "UExpression":
        return UExpression({SignedWord(tuple(letters), tuple(anchor)): coeff})

    def add_term(self, w: SignedWord, c: PiScalar) -> None:
        if c.is_zero():
            return
        cur = self.terms.get(w)
        new = c if cur is None else cur + c
        if new.is_zero():
            self.terms.pop(w, None)
        else:
            self.terms[w] = new

    def __add__(self, other: "UExpression") -> "UExpression":
        out = UExpression(dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def scale(self, c: PiScalar) -> "UExpression":
        out = UExpression()
        for w, v in self.terms.items():
            out.add_term(w, v * c)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, UExpression) and self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "UExpression(0)"
        bits = [f"({c.render()})*{format_word(w)}" for w, c in sorted(self.terms.items(), key=lambda kv: kv[0].letters)]
        return "UExpression(" + " + ".join(bits) + ")"


def normal_order(datum: SuperCartanDatum, x: UExpression) -> UExpression:
    """Rewrite with e_i f_j = pi^{|i||j|} f_j e_i + delta_ij [<h_i,mu>] until
    every word has all down letters left of all up letters."""
    out = UExpression()
    stack = [(w, c) for w, c in x.terms.items()]
    while stack:
        word, coeff = stack.pop()
        letters = word.letters
        pos = -1
        for p in range(len(letters) - 1):
            if letters[p][0] == UP and letters[p + 1][0] == DOWN:
                pos = p
                break
        if pos < 0:
            out.add_term(word, coeff)
            continue
        (_, i), (_, j) = letters[pos], letters[pos + 1]
        mu = pairing_shift(datum, word.anchor, wt(datum, letters[pos + 2 :]))
        swapped = letters[:pos] + ((DOWN, j), (UP, i)) + letters[pos + 2 :]
        sign = qpi_monomial(0, datum.parity(i) * datum.parity(j))
        stack.append((SignedWord(swapped, word.anchor), coeff * sign))
        if i == j:
            shorter = letters[:pos] + letters[pos + 2 :]
            qint = qpi_int(mu[i], d=datum.d_i(i), parity=datum.parity(i))
            if not qint.is_zero():
                stack.append((SignedWord(shorter, word.anchor), coeff * qint))
    return out


# ---------------------------------------------------------------------------
# Symmetries.


def _omega_word(datum, word: SignedWord) -> tuple[SignedWord, PiScalar]:
    letters = tuple((-d, i) for d, i in word.letters)
    anchor = tuple(-h for h in word.anchor)
    return SignedWord(letters, anchor), ONE


def _psi_word(datum, word: SignedWord) -> tuple[SignedWord, PiScalar]:
    piexp = 0
    for d, i in word.letters:
        if d == DOWN:
            piexp += parity_i_lambda(datum, i, word.anchor)
    return word, qpi_monomial(0, piexp)


def _rho_word(datum, word: SignedWord) -> tuple[SignedWord, PiScalar]:
    scal = ONE
    new_letters = []
    for p, (d, i) in enumerate(word.letters):
        mu = local_weight(datum, word, p)
        if d == UP:
            scal = scal * q_power(-mu[i] - 1, d=datum.d_i(i))
        else:
            scal = scal * q_power(mu[i] - 1, d=datum.d_i(i))
        new_letters.append((-d, i))
    new_anchor = target_weight(datum, word)
    return SignedWord(tuple(reversed(new_letters)), new_anchor), scal


def apply_symmetry(datum: SuperCartanDatum, which: str, x: UExpression) -> UExpression:
    """omega, psi antilinear automorphisms; rho linear antiautomorphism;
    star = rho.psi and shriek = psi.rho, antilinear antiautomorphisms."""
    if which == "star":
        return apply_symmetry(datum, "rho", apply_symmetry(datum, "psi", x))
    if which == "shriek":
        return apply_symmetry(datum, "psi", apply_symmetry(datum, "rho", x))
    table = {"omega": (_omega_word, True), "psi": (_psi_word, True), "rho": (_rho_word, False)}
    if which not in table:
        raise ValueError(f"unknown symmetry {which!r}")
    fn, antilinear = table[which]
    out = UExpression()
    for word, coeff in x.terms.items():
        image, scal = fn(datum, word)
        c = coeff.bar() if antilinear else coeff
        out.add_term(image, c * scal)
    return out


# ---------------------------------------------------------------------------
# The sesquilinear form.


def _w_form(datum: SuperCartanDatum, letters: tuple[Letter, ...], lam: Weight) -> PiScalar:
    """<W 1_lam, 1_lam>: normal-order the word (conjugating extracted
    coefficients), strip the down letters, finish on the half quantum group."""
    key = (id(datum), letters, lam)
    hit = _wform_cache.get(key)
    if hit is not None:
        return hit
    ordered = normal_order(datum, UExpression.word(letters, lam))
    total = ZERO
    for word, coeff in ordered.terms.items():
        value = _strip_ordered(datum, word)
        total = total + coeff.bar() * value
    _wform_cache[key] = total
    return total


def _strip_ordered(datum: SuperCartanDatum, word: SignedWord) -> PiScalar:
    """<f..f e..e 1_lam, 1_lam>: strip each down letter left to right via
    adjunction, accumulating unconjugated scalars and growing the second
    slot; finish with the bilinear form on positive words."""
    lam = word.anchor
    letters = list(word.letters)
    scal = ONE
    second: list[int] = []
    while letters and letters[0][0] == DOWN:
        _, i = letters.pop(0)
        mu = pairing_shift(datum, lam, wt(datum, tuple(letters)))
        scal = scal * q_power(mu[i] - 1, d=datum.d_i(i)) * qpi_monomial(
            0, datum.parity(i) * ((mu[i] - 1) % 2)
        )
        second.insert(0, i)
    first = [i for _, i in letters]
    if len(first) != len(second):
        # weight mismatch between slots: orthogonal
        return ZERO
    theta_first = tuple(reversed(first))
    theta_second = tuple(reversed(second))
    return scal * f_form(datum, theta_first, theta_second)


def cq_form(datum: SuperCartanDatum, a: SignedWord, b: SignedWord) -> PiScalar:
    """Sesquilinear form <a, b>, antilinear in a, computed by transferring
    b's letters across, normal ordering, stripping, and finishing on the
    half quantum group.  Zero unless anchors and weights agree."""
    if tuple(a.anchor) != tuple(b.anchor):
        return ZERO
    if wt(datum, a) != wt(datum, b):
        return ZERO
    lam = tuple(a.anchor)
    scal = ONE
    first = list(a.letters)
    remaining = list(b.letters)
    while remaining:
        direction, i = remaining.pop(0)
        nu = pairing_shift(datum, lam, wt(datum, tuple(remaining)))
        h = nu[i]
        if direction == DOWN:
            scal = scal * q_power(h - 1, d=datum.d_i(i))
            first.insert(0, (UP, i))
        else:
            scal = scal * q_power(-h - 1, d=datum.d_i(i)) * qpi_monomial(
                0, datum.parity(i) * ((h + 1) % 2)
            )
            first.insert(0, (DOWN, i))
    return scal * _w_form(datum, tuple(first), lam)


def cq_form_expr(datum: SuperCartanDatum, x: UExpression, y: UExpression) -> PiScalar:
    """Sesquilinear extension: conjugates coefficients on the left slot."""
    total = ZERO
    for wa, ca in x.terms.items():
        for wb, cb in y.terms.items():
            val = cq_form(datum, wa, wb)
            if not val.is_zero():
                total = total + ca.bar() * cb * val
    return total


def divided_word(datum: SuperCartanDatum, direction: int, i: int, n: int, lam: Weight) -> UExpression:
    """e_i^(n) 1_lam or f_i^(n) 1_lam: one word with coefficient 1/[n]!."""
    if n < 1:
        raise ValueError("divided power requires n >= 1")
    fact = qpi_factorial(n, d=datum.d_i(i), parity=datum.parity(i))
    assert fact.is_invertible(), "[n]! is invertible over the pi-field"
    letters = ((direction, i),) * n
    return UExpression.word(letters, lam, ONE / fact)


# ---------------------------------------------------------------------------
# Text grammar: whitespace-separated "+name"/"-name" tokens, leftmost token
# is the leftmost (last-acting) letter; weights are comma-separated pairings
# in datum index order.


def parse_word(datum: SuperCartanDatum, text: str, lam: Weight) -> SignedWord:
    letters = []
    for tok in text.split():
        if tok[0] == "+":
            letters.append((UP, datum.index_of(tok[1:])))
        elif tok[0] == "-":
            letters.append((DOWN, datum.index_of(tok[1:])))
        else:
            raise ValueError(f"letter {tok!r} must start with '+' or '-'")
    return SignedWord(tuple(letters), tuple(lam))


def parse_weight(datum: SuperCartanDatum, text: str) -> Weight:
    parts = [p.strip() for p in text.split(",")] if text.strip() else []
    if len(parts) != datum.rank:
        raise ValueError(f"weight needs {datum.rank} comma-separated pairings")
    return tuple(int(p) for p in parts)


def format_word(w: SignedWord) -> str:
    toks = [("+" if d == UP else "-") + str(i) for d, i in w.letters]
    return " ".join(toks) if toks else "(empty)"
