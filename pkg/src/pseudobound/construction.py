"""
Assembling per-region rerouting counts into lower-bound constants.

Each region contributes ``density * log2 F`` to the exponent constant
``c``, where ``density`` is the limit of (number of patches) / n**2.
Recursing into the ``k`` parallel bundles multiplies ``c`` by
``k / (k - 1)``.

Every printed number is rounded *down*, and each one is the floor of a
certified lower bound for the quantity it names, so the whole report
remains a valid lower-bound certificate.
"""

from __future__ import annotations

import os
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .bipermutation import (
    MemoTable,
    ReroutingCounter,
    format_decimal,
    gen_complete_sequence,
    log2_floor,
)
from .geometry import bipermutation_of_patch, load_patch, parse_rational
from .lgv import lgv_count

__all__ = [
    "ConfigError",
    "CountSource",
    "RegionSpec",
    "ConstructionConfig",
    "ContributionRow",
    "BoundReport",
    "floor_places",
    "contribution",
    "assemble_bound",
    "amplify",
    "density_from_areas",
    "parse_config",
    "load_config",
    "format_report",
    "summary_line",
]

PLACES = 5
LOG2_PLACES = 2
# precision of the log2 lower bound that feeds the contributions
LOG2_WORK_PLACES = 30

SOURCE_KINDS = ("count", "log2_bound", "patch", "grid3", "complete")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class CountSource:
    kind: str
    value: object

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise ConfigError(f"unknown count source {self.kind!r}")


@dataclass(frozen=True)
class RegionSpec:
    name: str
    density: Fraction
    source: CountSource

    def __post_init__(self):
        if self.density <= 0:
            raise ConfigError(f"region {self.name}: density must be positive")


@dataclass(frozen=True)
class ConstructionConfig:
    k: int
    regions: tuple
    label: str = ""

    def __post_init__(self):
        if self.k < 2:
            raise ConfigError("k must be at least 2")
        names = [r.name for r in self.regions]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ConfigError(f"duplicate region names: {', '.join(sorted(dup))}")


@dataclass(frozen=True)
class ContributionRow:
    name: str
    log2F: Fraction  # certified lower bound on log2 F
    density: Fraction
    contribution: Fraction  # floor of density * log2F at PLACES
    runtime: float | None = None
    count: int | None = None

    @property
    def exact_product(self) -> Fraction:
        return self.density * self.log2F


@dataclass
class BoundReport:
    k: int
    rows: list = field(default_factory=list)
    label: str = ""
    places: int = PLACES

    @property
    def exact_sum(self) -> Fraction:
        return sum((r.exact_product for r in self.rows), Fraction(0))

    @property
    def c(self) -> Fraction:
        return floor_places(self.exact_sum, self.places)

    @property
    def c_final(self) -> Fraction:
        return amplify(self.exact_sum, self.k, self.places)

    @property
    def runtime(self) -> float | None:
        times = [r.runtime for r in self.rows if r.runtime is not None]
        return sum(times) if times else None


def floor_places(x: Fraction, places: int = PLACES) -> Fraction:
    scale = 10 ** places
    return Fraction((x.numerator * scale) // x.denominator, scale)


def amplify(c, k: int, places: int = PLACES) -> Fraction:
    """``k/(k-1) * c`` rounded down to ``places`` decimals."""
    if k < 2:
        raise ValueError("k must be at least 2")
    c = Fraction(c)
    if c <= 0:
        raise ValueError("c must be positive")
    return floor_places(Fraction(k, k - 1) * c, places)


def density_from_areas(region_area_coeff, patch_area) -> Fraction:
    """Patches per n**2: (region area / n**2) / patch area."""
    region_area_coeff = Fraction(region_area_coeff)
    patch_area = Fraction(patch_area)
    if region_area_coeff <= 0 or patch_area <= 0:
        raise ValueError("areas must be positive")
    return region_area_coeff / patch_area


def _resolve(source: CountSource, counter: ReroutingCounter, base_dir: str) -> tuple:
    """Return (log2 lower bound, exact count or None, seconds or None)."""
    kind, value = source.kind, source.value
    if kind == "log2_bound":
        return Fraction(value), None, None
    t0 = time.perf_counter()
    if kind == "count":
        count = int(value)
    elif kind == "grid3":
        count = lgv_count(int(value))
    elif kind == "complete":
        count = counter.count(gen_complete_sequence(int(value)))
    else:
        path = value if os.path.isabs(value) else os.path.join(base_dir, value)
        try:
            patch = load_patch(path)
        except OSError as exc:
            raise ConfigError(f"cannot read patch {value!r}: {exc.strerror}") from None
        count = counter.count(bipermutation_of_patch(patch))
    elapsed = time.perf_counter() - t0 if kind != "count" else None
    if count < 1:
        raise ConfigError("rerouting count must be positive")
    return log2_floor(count, LOG2_WORK_PLACES), count, elapsed


def contribution(
    region: RegionSpec,
    counter: ReroutingCounter | None = None,
    base_dir: str = ".",
    places: int = PLACES,
) -> ContributionRow:
    counter = counter if counter is not None else ReroutingCounter(MemoTable())
    log2F, count, runtime = _resolve(region.source, counter, base_dir)
    return ContributionRow(
        region.name,
        log2F,
        region.density,
        floor_places(region.density * log2F, places),
        runtime,
        count,
    )


def assemble_bound(
    config: ConstructionConfig,
    counter: ReroutingCounter | None = None,
    base_dir: str = ".",
    places: int = PLACES,
) -> BoundReport:
    counter = counter if counter is not None else ReroutingCounter(MemoTable())
    report = BoundReport(config.k, label=config.label, places=places)
    for region in config.regions:
        try:
            report.rows.append(contribution(region, counter, base_dir, places))
        except (ConfigError, ValueError) as exc:
            raise ConfigError(f"region {region.name}: {exc}") from None
    return report


_DECIMAL = re.compile(r"[+-]?\d+(?:\.\d+)?\Z")


def parse_config(text: str, label: str = "") -> ConstructionConfig:
    """Parse ``k <int>`` and ``region <name> density <q> <source> <value>`` lines."""
    k = None
    regions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        where = f"line {lineno}"
        if tok[0] == "k":
            if len(tok) != 2 or not tok[1].isdigit():
                raise ConfigError(f"{where}: expected 'k <int>'")
            k = int(tok[1])
        elif tok[0] == "label":
            label = line[len("label"):].strip()
        elif tok[0] == "region":
            if len(tok) != 6 or tok[2] != "density":
                raise ConfigError(f"{where}: expected 'region <name> density <rational> <source> <value>'")
            name, dens, kind, value = tok[1], tok[3], tok[4], tok[5]
            try:
                density = parse_rational(dens)
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"{where}: bad density {dens!r}") from None
            if kind in ("count", "grid3", "complete"):
                if not value.isdigit():
                    raise ConfigError(f"{where}: {kind} needs a nonnegative integer")
                parsed = int(value)
            elif kind == "log2_bound":
                if not _DECIMAL.match(value):
                    raise ConfigError(f"{where}: bad decimal {value!r}")
                parsed = Fraction(value)
            elif kind == "patch":
                parsed = value
            else:
                raise ConfigError(f"{where}: unknown count source {kind!r}")
            regions.append(RegionSpec(name, density, CountSource(kind, parsed)))
        else:
            raise ConfigError(f"{where}: unknown statement {tok[0]!r}")
    if k is None:
        raise ConfigError("missing 'k' statement")
    if not regions:
        raise ConfigError("no regions")
    return ConstructionConfig(k, tuple(regions), label)


def load_config(path) -> ConstructionConfig:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_config(text, label=os.path.splitext(os.path.basename(str(path)))[0])


def _density_str(d: Fraction) -> str:
    return str(d.numerator) if d.denominator == 1 else f"{d.numerator}/{d.denominator}"


def format_report(report: BoundReport) -> str:
    p = report.places
    header = ("region", "log2(# of reroutings)", "# of patches", "contribution", "computing time")
    body = []
    for r in report.rows:
        body.append((
            r.name,
            format_decimal(floor_places(r.log2F, LOG2_PLACES), LOG2_PLACES),
            _density_str(r.density),
            format_decimal(r.contribution, p),
            "-" if r.runtime is None else f"{r.runtime:.2f}s",
        ))
    total_time = report.runtime
    footer = ("sum", "-", "-", format_decimal(report.c, p), "-" if total_time is None else f"{total_time:.2f}s")
    widths = [max(len(row[i]) for row in [header, *body, footer]) for i in range(5)]

    def fmt(row):
        cells = [row[0].ljust(widths[0])] + [row[i].rjust(widths[i]) for i in range(1, 5)]
        return "  ".join(cells)

    rule = "-" * len(fmt(header))
    out = []
    if report.label:
        out.append(f"# {report.label}")
    out += [fmt(header), rule, *map(fmt, body), rule, fmt(footer), ""]
    out.append(f"c       >= {format_decimal(report.c, p)}")
    out.append(f"c_final >= {format_decimal(report.c_final, p)}   (k/(k-1) * c, k = {report.k})")
    out.append(summary_line(report))
    return "\n".join(out)


def summary_line(report: BoundReport) -> str:
    p = report.places
    return f"SUMMARY c={format_decimal(report.c, p)} k={report.k} c_final={format_decimal(report.c_final, p)}"
