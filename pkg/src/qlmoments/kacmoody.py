"""Root combinatorics for the star-shaped generalized Cartan matrix.

The matrix has size (r+1) x (r+1), with 2 on the diagonal and -1 joining
node r+1 to each of the nodes 1..r.  Roots are integer coefficient vectors
(k_1, ..., k_{r+1}); real roots are exactly the orbit of the last simple
root under the fundamental reflections, which is how enumeration and the
realness certificate work here (no bilinear form needed).

Words are tuples of generator indices in 1..r+1 read left-to-right as a
product of reflections; acting with a word applies its rightmost letter
first, so word(alpha) composes like the group element it spells.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Root",
    "cartan_matrix",
    "cartan_determinant",
    "reflect",
    "apply_word",
    "simple_root",
    "positive_real_roots_at_level",
    "positive_real_roots_up_to_height",
    "reduction_word",
    "inversion_roots",
    "is_reduced",
    "wstar_word",
    "wstar_report",
    "WstarReport",
]


@dataclass(frozen=True)
class Root:
    """Element of the root lattice; k[-1] is the level coefficient."""

    k: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.k) - 1

    @property
    def height(self) -> int:
        return sum(self.k)

    @property
    def level(self) -> int:
        return self.k[-1]

    @property
    def is_positive(self) -> bool:
        return any(self.k) and all(v >= 0 for v in self.k)

    @property
    def is_negative(self) -> bool:
        return any(self.k) and all(v <= 0 for v in self.k)


def simple_root(i: int, r: int) -> Root:
    k = [0] * (r + 1)
    k[i - 1] = 1
    return Root(tuple(k))


def cartan_matrix(r: int) -> list[list[int]]:
    if r < 1:
        raise ValueError("rank parameter must be >= 1")
    n = r + 1
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    for i in range(r):
        a[i][n - 1] = -1
        a[n - 1][i] = -1
    return a


def cartan_determinant(r: int) -> int:
    """Determinant of the star matrix: -2^(r-1) (r-4)."""
    return -(2 ** (r - 1)) * (r - 4)


def reflect(i: int, alpha: Root) -> Root:
    """Fundamental reflection w_i acting on a lattice element (i is 1-based)."""
    r = alpha.rank
    if not 1 <= i <= r + 1:
        raise ValueError(f"reflection index {i} out of range 1..{r + 1}")
    k = list(alpha.k)
    if i <= r:
        k[i - 1] = k[r] - k[i - 1]
    else:
        k[r] = -k[r] + sum(k[:r])
    return Root(tuple(k))


def apply_word(word: tuple[int, ...], alpha: Root) -> Root:
    """Apply a word as a group element: rightmost letter acts first."""
    for i in reversed(word):
        alpha = reflect(i, alpha)
    return alpha


def positive_real_roots_up_to_height(r: int, max_height: int,
                                     max_level: int | None = None) -> list[Root]:
    """All positive real roots with bounded height (and optionally level).

    Breadth-first closure of the reflection action starting from the last
    simple root.  Any positive real root admits a height-descending chain
    of reflections through positive roots reaching a simple root, and a
    descent step never raises the level, so the bounded search is complete.
    """
    if r < 1:
        raise ValueError("rank parameter must be >= 1")
    start = simple_root(r + 1, r)
    seen = {start.k}
    frontier = [start]
    out = [start]
    while frontier:
        nxt = []
        for alpha in frontier:
            for i in range(1, r + 2):
                beta = reflect(i, alpha)
                if beta.k in seen or not beta.is_positive:
                    continue
                if beta.height > max_height:
                    continue
                if max_level is not None and beta.level > max_level:
                    continue
                seen.add(beta.k)
                nxt.append(beta)
                out.append(beta)
        frontier = nxt
    out.sort(key=lambda a: (a.height, a.k))
    return out


def positive_real_roots_at_level(r: int, n: int,
                                 height_bound: int | None = None) -> list[Root]:
    """The finite set of positive real roots with level coefficient n."""
    if n <= 0:
        raise ValueError("level must be positive")
    if height_bound is None:
        # every coefficient of a positive level-n real root is <= n
        height_bound = (r + 1) * n
    roots = positive_real_roots_up_to_height(r, height_bound, max_level=n)
    return [a for a in roots if a.level == n]


def reduction_word(alpha: Root) -> tuple[int, ...]:
    """Reduced word sending alpha to the last simple root.

    Greedy height descent, ties broken toward the smallest generator
    index; simple roots other than the last take the two-step detour
    through level one.  The result is certified reduced via its inversion
    set before returning.
    """
    r = alpha.rank
    if not alpha.is_positive:
        raise ValueError("expected a positive root")
    target = simple_root(r + 1, r)
    applied: list[int] = []  # letters in the order they act on alpha
    cur = alpha
    guard = 0
    while cur != target:
        guard += 1
        if guard > 10_000:
            raise ArithmeticError("descent did not terminate; input not a real root?")
        if cur.height == 1:
            # cur = alpha_i with i <= r: raise to alpha_i + alpha_{r+1}, then drop
            i = cur.k.index(1) + 1
            cur = reflect(r + 1, cur)
            applied.append(r + 1)
            continue
        step = None
        for i in range(1, r + 2):
            beta = reflect(i, cur)
            if beta.height < cur.height and beta.is_positive:
                step = i
                cur = beta
                break
        if step is None:
            raise ArithmeticError(f"no height descent from {cur}; not a real root?")
        applied.append(step)
    word = tuple(reversed(applied))
    if not is_reduced(word, r):
        raise ArithmeticError(f"descent produced a non-reduced word {word}")
    return word


def inversion_roots(word: tuple[int, ...], r: int) -> list[Root]:
    """Positive roots sent negative by the word, one per letter when reduced.

    For word (i_1, ..., i_l) these are w_{i_l}...w_{i_{k+1}}(alpha_{i_k}).
    """
    out = []
    for k in range(len(word)):
        beta = simple_root(word[k], r)
        for j in range(len(word) - 1, k, -1):
            beta = reflect(word[j], beta)
        out.append(beta)
    return out


def is_reduced(word: tuple[int, ...], r: int) -> bool:
    inv = inversion_roots(word, r)
    if any(not b.is_positive for b in inv):
        return False
    return len({b.k for b in inv}) == len(word)


def wstar_word(r: int) -> tuple[int, ...]:
    """The composite element w_12 w_13 w_23 with w_ij = w_i w_j w_{r+1} w_i w_j."""
    if r < 4:
        raise ValueError("needs rank parameter >= 4")

    def pair(i: int, j: int) -> tuple[int, ...]:
        return (i, j, r + 1, i, j)

    return pair(1, 2) + pair(1, 3) + pair(2, 3)


@dataclass
class WstarReport:
    r: int
    height_bound: int
    checked: int = 0
    negative_class: list[Root] = field(default_factory=list)
    violations: list[Root] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _expected_negative_class(r: int) -> set[tuple[int, ...]]:
    out: set[tuple[int, ...]] = set()
    for i in range(3):
        k = [0] * (r + 1)
        k[i] = 1
        out.add(tuple(k))
    for mask in range(1, 8):
        k = [0] * (r + 1)
        for i in range(3):
            if mask >> i & 1:
                k[i] = 1
        k[r] = 1
        out.add(tuple(k))
    k = [0] * (r + 1)
    k[0] = k[1] = k[2] = 1
    k[r] = 2
    out.add(tuple(k))
    return out


def wstar_report(r: int, height_bound: int) -> WstarReport:
    """Classify positive real roots by the sign of their w*-image.

    Roots sent negative must form the explicit eleven-element family
    supported on nodes {1, 2, 3, r+1}; roots kept positive must satisfy
    k_1 + k_2 + k_3 <= 6 * (k_4 + ... + k_r).
    """
    word = wstar_word(r)
    expected_neg = _expected_negative_class(r)
    rep = WstarReport(r=r, height_bound=height_bound)
    for alpha in positive_real_roots_up_to_height(r, height_bound):
        rep.checked += 1
        image = apply_word(word, alpha)
        if image.is_negative:
            rep.negative_class.append(alpha)
            if alpha.k not in expected_neg:
                rep.violations.append(alpha)
        elif image.is_positive:
            head = sum(alpha.k[:3])
            tail = sum(alpha.k[3:r])
            if head > 6 * tail:
                rep.violations.append(alpha)
        else:
            rep.violations.append(alpha)  # mixed signs: not a real root image
    return rep
