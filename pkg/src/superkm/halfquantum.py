"""The half quantum (super)group f: words in theta_i, coproduct twist
coefficients, the bilinear form, Serre elements, and an independent
permutation-sum oracle for the form.

Words are tuples of index positions read left to right, so (i, j) stands
for theta_i theta_j.  Coefficients live in Q(q)[pi]/(pi^2-1).
"""

from __future__ import annotations

from itertools import permutations

from .cartan import SuperCartanDatum, root_form
from .scalars import ONE, ZERO, PiScalar, qpi_binom, qpi_monomial

FWord = tuple[int, ...]
FExpression = dict[FWord, PiScalar]

_form_cache: dict = {}


def clear_caches() -> None:
    _form_cache.clear()


def word_degree(datum: SuperCartanDatum, w: FWord) -> tuple[int, ...]:
    """Q-degree of a word: the multiset of its letters as a root vector."""
    deg = [0] * datum.rank
    for i in w:
        deg[i] += 1
    return tuple(deg)


def word_parity(datum: SuperCartanDatum, w: FWord) -> int:
    return sum(datum.parity(i) for i in w) % 2


def _twist(datum: SuperCartanDatum, a: int, b: int) -> PiScalar:
    """pi^{|a||b|} q^{-(alpha_a, alpha_b)}."""
    form = root_form(datum, datum.alpha(a), datum.alpha(b))
    return qpi_monomial(-form, datum.parity(a) * datum.parity(b))


def coproduct_split_coeff(datum: SuperCartanDatum, w: FWord, S: frozenset | set) -> PiScalar:
    """Twist coefficient of the splitting of r(w) that routes the positions
    in S to the right-hand tensor factor and the rest to the left.

    Each letter sent right picks up pi^{|i_p||i_k|} q^{-(alpha_p, alpha_k)}
    for every later letter k sent left.
    """
    if not S <= set(range(1, len(w) + 1)):
        raise ValueError("split positions out of range")
    out = ONE
    for p in S:
        for k in range(p + 1, len(w) + 1):
            if k not in S:
                out = out * _twist(datum, w[p - 1], w[k - 1])
    return out


def theta_pair(datum: SuperCartanDatum, i: int) -> PiScalar:
    """(theta_i, theta_i) = 1/(1 - pi_i q_i^2)."""
    return ONE / (ONE - qpi_monomial(2, 1, d=datum.d_i(i), parity=datum.parity(i)))


def f_form(datum: SuperCartanDatum, w: FWord, w2: FWord) -> PiScalar:
    """Bilinear form on f by peeling the last letter of the second word.

    (x, y theta_j) expands through the coproduct of x; memoized per datum.
    """
    if word_degree(datum, w) != word_degree(datum, w2):
        return ZERO
    key = (id(datum), "form", w, w2)
    hit = _form_cache.get(key)
    if hit is not None:
        return hit
    if not w:
        out = ONE
    else:
        j = w2[-1]
        rest = w2[:-1]
        out = ZERO
        pair = theta_pair(datum, j)
        for p in range(1, len(w) + 1):
            if w[p - 1] != j:
                continue
            coeff = coproduct_split_coeff(datum, w, {p})
            out = out + coeff * pair * f_form(datum, w[: p - 1] + w[p:], rest)
    _form_cache[key] = out
    return out


def f_form_oracle(datum: SuperCartanDatum, w: FWord, w2: FWord) -> PiScalar:
    """Closed permutation sum for the form, independent of f_form.

    Sum over permutations sigma with i_{sigma(r)} = j_r of the product of
    1/(1 - pi q^2) per letter and one twist factor per inversion.
    """
    if len(w) != len(w2):
        return ZERO
    d = len(w)
    base = ONE
    for i in w:
        base = base * theta_pair(datum, i)
    total = ZERO
    for sigma in permutations(range(1, d + 1)):
        if any(w[sigma[r] - 1] != w2[r] for r in range(d)):
            continue
        term = base
        for r in range(d):
            for s in range(r + 1, d):
                if sigma[r] > sigma[s]:
                    term = term * _twist(datum, w[r], w[s])
        total = total + term
    return total


def serre_element(datum: SuperCartanDatum, i: int, j: int) -> FExpression:
    """sum_r (-1)^r pi_i^{r|j| + r(r-1)/2} [d_ij+1 choose r] theta_i^{m-r} theta_j theta_i^r
    with m = d_ij + 1."""
    if i == j:
        raise ValueError("Serre element requires distinct indices")
    m = datum.d_ij(i, j) + 1
    out: FExpression = {}
    for r in range(m + 1):
        coeff = qpi_binom(m, r, d=datum.d_i(i), parity=datum.parity(i))
        piexp = (r * datum.parity(j) + r * (r - 1) // 2) * datum.parity(i)
        coeff = coeff * qpi_monomial(0, piexp)
        if r % 2 == 1:
            coeff = -coeff
        word = (i,) * (m - r) + (j,) + (i,) * r
        if not coeff.is_zero():
            out[word] = out.get(word, ZERO) + coeff
    return {w: c for w, c in out.items() if not c.is_zero()}


def expr_mul_word(expr: FExpression, w: FWord) -> FExpression:
    return {word + w: c for word, c in expr.items()}


def f_form_expr(datum: SuperCartanDatum, expr: FExpression, w2: FWord) -> PiScalar:
    out = ZERO
    for w, c in expr.items():
        out = out + c * f_form(datum, w, w2)
    return out


def all_words(datum: SuperCartanDatum, length: int):
    """All words of exactly the given length, lexicographic."""
    if length == 0:
        yield ()
        return
    for w in all_words(datum, length - 1):
        for i in range(datum.rank):
            yield w + (i,)
