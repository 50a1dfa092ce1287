"""Registry mapping method ids 1..13 to region procedures.

The numbering is the one used throughout the CLI and the simulation output:

 1 t interval                      8 bias-corrected bootstrap
 2 signed-rank (Walsh averages)    9 BCa bootstrap
 3 sign (order statistics)        10 randomized, uniform-shape profile
 4 asymptotic median with KDE     11 randomized, exponential-shape profile
 5 basic bootstrap                12 randomized, adaptive spacing profile
 6 bootstrap-SE with t quantile   13 randomized, adaptive plug-in profile
 7 percentile bootstrap
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .classical import (
    BootstrapDistribution,
    cr_asymp_median,
    cr_bootstrap,
    cr_sign,
    cr_t,
    cr_wilcoxon,
)
from .optimal import (
    cr_adaptive_edf,
    cr_adaptive_mom,
    cr_exponential_focused,
    cr_symmetric_focused,
)
from .regions import Region, SortedSample

__all__ = ["MethodInfo", "METHODS", "ALL_METHOD_IDS", "compute_region", "parse_method_ids"]


@dataclass(frozen=True)
class MethodInfo:
    method_id: int
    name: str
    randomized: bool = False
    needs_bootstrap: bool = False


METHODS: dict[int, MethodInfo] = {
    1: MethodInfo(1, "t_interval"),
    2: MethodInfo(2, "signed_rank"),
    3: MethodInfo(3, "sign"),
    4: MethodInfo(4, "asymp_median_kde"),
    5: MethodInfo(5, "boot_basic", needs_bootstrap=True),
    6: MethodInfo(6, "boot_se_t", needs_bootstrap=True),
    7: MethodInfo(7, "boot_percentile", needs_bootstrap=True),
    8: MethodInfo(8, "boot_bc", needs_bootstrap=True),
    9: MethodInfo(9, "boot_bca", needs_bootstrap=True),
    10: MethodInfo(10, "rand_uniform_profile", randomized=True),
    11: MethodInfo(11, "rand_exponential_profile", randomized=True),
    12: MethodInfo(12, "rand_adaptive_spacings", randomized=True),
    13: MethodInfo(13, "rand_adaptive_plugin", randomized=True),
}

ALL_METHOD_IDS = tuple(sorted(METHODS))

_BOOT_VARIANTS = {5: "basic", 6: "se", 7: "percentile", 8: "bc", 9: "bca"}

_RANDOMIZED: dict[int, Callable[[SortedSample, float, float], Region]] = {
    10: cr_symmetric_focused,
    11: cr_exponential_focused,
    12: cr_adaptive_mom,
    13: cr_adaptive_edf,
}


def compute_region(
    method_id: int,
    sample: SortedSample,
    alpha: float,
    *,
    u: float | None = None,
    boot: BootstrapDistribution | None = None,
) -> Region:
    """Dispatch to the procedure for ``method_id``.

    Randomized methods (10..13) require ``u``; bootstrap methods (5..9)
    require ``boot``.  Supplying what a method does not need is harmless, so
    a caller may prepare both once and evaluate several methods.
    """
    if method_id not in METHODS:
        raise ValueError(f"unknown method id {method_id}; valid ids are 1..13")
    info = METHODS[method_id]
    if info.randomized:
        if u is None:
            raise ValueError(f"method {method_id} is randomized and needs u")
        return _RANDOMIZED[method_id](sample, alpha, u)
    if info.needs_bootstrap:
        if boot is None:
            raise ValueError(f"method {method_id} needs a bootstrap distribution")
        return cr_bootstrap(sample, alpha, boot, _BOOT_VARIANTS[method_id])
    if method_id == 1:
        return cr_t(sample, alpha)
    if method_id == 2:
        return cr_wilcoxon(sample, alpha)
    if method_id == 3:
        return cr_sign(sample, alpha)
    return cr_asymp_median(sample, alpha)


def parse_method_ids(text: str) -> tuple[int, ...]:
    """Parse a CLI method list: 'all' or comma-separated ids, deduplicated."""
    if text.strip().lower() == "all":
        return ALL_METHOD_IDS
    ids = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            mid = int(part)
        except ValueError:
            raise ValueError(f"method ids must be integers, got {part!r}") from None
        if mid not in METHODS:
            raise ValueError(f"unknown method id {mid}; valid ids are 1..13")
        ids.append(mid)
    if not ids:
        raise ValueError("no method ids given")
    return tuple(sorted(set(ids)))
