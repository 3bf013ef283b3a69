"""Exact integer counting formulas for Stirling complexes.

Everything here is arbitrary-precision integer arithmetic: no floats, no
modular shortcuts.  The three routes to the sphere count f(m, n) --
``f_closed``, ``f_surjection_form``, ``f_recursive`` -- are deliberately
independent code paths so they can cross-check one another, and the Euler
characteristic has both a direct alternating-sum formula and the
Euler-Poincaré form 1 + (-1)^(n-m) f(m,n).
"""

from __future__ import annotations

import threading
from math import comb, factorial

from .errors import DomainError, InternalCheckError

__all__ = [
    "stirling2",
    "surjections",
    "f_closed",
    "f_surjection_form",
    "f_recursive",
    "euler_formula",
    "cell_count",
    "cell_count_partial",
    "cover_count",
    "expected_sphere_count",
]

# Rows of the Stirling-triangle S(n, .) built so far; row n has entries 0..n.
# Guarded by a lock so concurrent queries can grow the table safely.
_stirling_rows: list[list[int]] = [[1]]
_stirling_lock = threading.Lock()


def stirling2(n: int, m: int) -> int:
    """Stirling number of the second kind: partitions of an n-set into m blocks.

    Computed by the triangle recurrence S(n,m) = m*S(n-1,m) + S(n-1,m-1)
    with S(0,0) = 1; zero outside 0 <= m <= n (except S(0,0)).
    """
    if n < 0 or m < 0:
        raise DomainError(f"stirling2 needs n, m >= 0, got ({n}, {m})")
    if m > n:
        return 0
    if len(_stirling_rows) <= n:
        with _stirling_lock:
            while len(_stirling_rows) <= n:
                prev = _stirling_rows[-1]
                r = len(_stirling_rows)
                row = [0] * (r + 1)
                for j in range(1, r + 1):
                    row[j] = j * prev[j] if j < r else 0
                    row[j] += prev[j - 1]
                _stirling_rows.append(row)
    return _stirling_rows[n][m]


def surjections(m: int, n: int) -> int:
    """Number of surjective functions from an n-set onto an m-set.

    Inclusion-exclusion sum, cross-checked in place against m! * S(n, m).
    """
    if m < 0 or n < 0:
        raise DomainError(f"surjections needs m, n >= 0, got ({m}, {n})")
    total = sum((-1) ** (m - i) * comb(m, i) * i**n for i in range(m + 1))
    check = factorial(m) * stirling2(n, m)
    if total != check:
        raise InternalCheckError(
            f"surjections({m},{n}): inclusion-exclusion {total} != m!*S(n,m) {check}"
        )
    return total


def _check_domain(m: int, n: int, who: str) -> None:
    if m < 2 or n < m:
        raise DomainError(f"{who} is defined for n >= m >= 2, got (m={m}, n={n})")


def f_closed(m: int, n: int) -> int:
    """Sphere count f(m, n) by the closed alternating sum over alpha."""
    _check_domain(m, n, "f_closed")
    return sum((-1) ** (m + a + 1) * comb(m, a + 1) * a**n for a in range(1, m))


def f_surjection_form(m: int, n: int) -> int:
    """f(m, n) as Surj(m-1,n) - Surj(m-2,n) + ... + (-1)^m Surj(1,n)."""
    _check_domain(m, n, "f_surjection_form")
    return sum((-1) ** (m - 1 - j) * surjections(j, n) for j in range(1, m))


_f_memo: dict[tuple[int, int], int] = {}


def f_recursive(m: int, n: int) -> int:
    """f(m, n) from the recursion f(m,n) = (m-1) f(m,n-1) + m f(m-1,n-1).

    Boundary conditions: f(2, n) = 1 and f(m, m) = m! - 1.
    """
    _check_domain(m, n, "f_recursive")
    if m == 2:
        return 1
    if n == m:
        return factorial(m) - 1
    key = (m, n)
    if key not in _f_memo:
        _f_memo[key] = (m - 1) * f_recursive(m, n - 1) + m * f_recursive(m - 1, n - 1)
    return _f_memo[key]


def euler_formula(m: int, n: int) -> int:
    """Euler characteristic of Str(T, n): alternating sum of the cell counts."""
    _check_domain(m, n, "euler_formula")
    return sum((-1) ** d * cell_count(m, n, d) for d in range(n - m + 1))


def cell_count(m: int, n: int, d: int) -> int:
    """Number of d-cells of Str(T, n) for any tree on m vertices.

    C(n,d) placements of the edge coordinates, (m-1)^d edge choices, and
    m! * S(n-d, m) vertex tuples covering all of V(T).
    """
    _check_domain(m, n, "cell_count")
    if not 0 <= d <= n - m:
        raise DomainError(f"cell_count dimension must satisfy 0 <= d <= n-m, got d={d}")
    return comb(n, d) * (m - 1) ** d * factorial(m) * stirling2(n - d, m)


def cell_count_partial(m: int, s: int, n: int, d: int) -> int:
    """d-cells of Str(T, S, n) when S is s singleton vertices (s <= m).

    Same placement/choice factors as cell_count, but the vertex tuples only
    need to cover the s required vertices: cover_count(m, s, n-d).
    """
    if m < 1 or not 0 <= s <= m:
        raise DomainError(f"cell_count_partial needs m >= 1, 0 <= s <= m, got ({m}, {s})")
    if n < 0 or not 0 <= d <= n:
        raise DomainError(f"cell_count_partial needs 0 <= d <= n, got (n={n}, d={d})")
    return comb(n, d) * (m - 1) ** d * cover_count(m, s, n - d)


def cover_count(m: int, s: int, n: int) -> int:
    """Functions [n] -> [m] whose image contains a fixed s-subset.

    Inclusion-exclusion over which required elements are missed:
    sum_k (-1)^k C(s,k) (m-k)^n.
    """
    if m < 0 or not 0 <= s <= m or n < 0:
        raise DomainError(f"cover_count needs m >= s >= 0 and n >= 0, got ({m}, {s}, {n})")
    return sum((-1) ** k * comb(s, k) * (m - k) ** n for k in range(s + 1))


def expected_sphere_count(k: int, n: int) -> int:
    """Wedge size predicted for a complex whose family has k parts.

    f(k, n) for k >= 2; for k <= 1 the complex is contractible, so 0.
    (f itself is only defined for k >= 2, hence this harness-side wrapper.)
    """
    if k <= 1:
        return 0
    return f_closed(k, n)
