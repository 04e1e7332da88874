"""3-AP-free subsets of [N]: torus construction, Behrend baseline, exact verification."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import _core

__version__ = _core.__version__

__all__ = [
    "construct",
    "behrend_construct",
    "count_aps_bruteforce",
    "count_aps_convolution",
    "is_3ap_free",
    "measure_exact",
    "recommended_d",
    "theoretical_bound",
    "conservative_delta",
    "coord_penalty",
    "theory_check",
    "replay",
]


def _frac(text: str) -> Fraction:
    return Fraction(text)


def _rat(value: Fraction | int | str) -> str:
    f = Fraction(value)
    return f"{f.numerator}/{f.denominator}"


def construct(
    n: int,
    d: Optional[int] = None,
    epsilon: Fraction | str = Fraction(1, 16),
    seed: int = 0,
    mu_samples: int = 8,
    variant: str = "U",
    c2: Optional[Fraction] = None,
    unsafe_c2: bool = False,
    w3_literal: bool = False,
    skip_verify: bool = False,
    threads: int = 1,
) -> dict[str, Any]:
    """Runs the torus construction; returns the set document (elements + provenance)."""
    text = _core.construct_json(
        n,
        d,
        _rat(epsilon),
        seed,
        mu_samples,
        variant,
        None if c2 is None else _rat(c2),
        unsafe_c2,
        w3_literal,
        skip_verify,
        threads,
    )
    doc = json.loads(text)
    if doc.get("epsilon") is not None:
        doc["epsilon"] = _frac(doc["epsilon"])
    return doc


def behrend_construct(n: int, d: int) -> list[int]:
    return _core.behrend_construct(n, d)


def count_aps_bruteforce(elements: Sequence[int], max_witnesses: int = 100, threads: int = 1):
    """Returns (count, witnesses, capped); witnesses are (x, y, z) tuples."""
    return _core.count_aps_bruteforce(list(elements), max_witnesses, threads)


def count_aps_convolution(elements: Sequence[int], n: int) -> int:
    return _core.count_aps_convolution(list(elements), n)


def is_3ap_free(elements: Sequence[int], threads: int = 1) -> bool:
    return _core.is_3ap_free(list(elements), threads)


def measure_exact(epsilon: Fraction | str = Fraction(1, 16), variant: str = "U") -> Fraction:
    return _frac(_core.measure_exact(_rat(epsilon), variant))


def recommended_d(n: int, mode: str = "new") -> int:
    return _core.recommended_d(n, mode)


def theoretical_bound(n: int, d: int, epsilon: Fraction | str = Fraction(1, 16)) -> tuple[Optional[Fraction], float]:
    """(exact value or None, float approximation)."""
    exact, approx = _core.theoretical_bound(n, d, _rat(epsilon))
    return (None if exact is None else _frac(exact), approx)


def conservative_delta(n: int, d: int) -> Fraction:
    return _frac(_core.conservative_delta(n, d))


def coord_penalty(a1: Fraction | str, a2: Fraction | str) -> Fraction:
    return _frac(_core.coord_penalty(_rat(a1), _rat(a2)))


def theory_check(
    suite: str,
    grid: int = 64,
    trials: int = 10000,
    seed: int = 1,
    epsilon: Fraction | str = Fraction(1, 16),
    d0: int = 1,
    threads: int = 1,
) -> dict[str, Any]:
    return json.loads(_core.theory_check_json(suite, grid, trials, seed, _rat(epsilon), d0, threads))


def replay(violation_input: dict[str, Any]) -> Optional[str]:
    return _core.replay_json(json.dumps(violation_input))
