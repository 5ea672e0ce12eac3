# mclaw/services/config_parser.py
"""
Run-configuration file parser.

Grammar:
    # comment                       (also after a value)
    [section]                       run | geometry | flux | initial | grid | scheme | checks
    key = value
    key = a, b, c                   list keys; commas inside (...) stay with the item
    tolerances = mass: 1e-12, linf: 1e-10

A `[run] scenario = name` line starts from a catalog scenario; keys in
the file override it. Every problem is collected with its line number
and raised together as one ConfigurationError.
"""

import logging
import re
from pathlib import Path

from pydantic import ValidationError

from mclaw.errors import ConfigIssue, ConfigurationError
from mclaw.schemas.config import RunConfig
from mclaw.services.expressions import split_top_level

logger = logging.getLogger(__name__)

SECTIONS = ("run", "geometry", "flux", "initial", "grid", "scheme", "checks")
LIST_KEYS = {
    ("geometry", "params"),
    ("flux", "params"),
    ("scheme", "output_times"),
    ("checks", "run"),
}
DICT_KEYS = {("checks", "tolerances")}

_SECTION_RE = re.compile(r"^\[\s*([A-Za-z_]+)\s*\]$")
_KEY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")


# ============================================
# 1. Text -> nested dict
# ============================================
def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].strip()


def _parse_value(section: str, key: str, raw: str, line: int, issues: list[ConfigIssue]):
    if (section, key) in LIST_KEYS:
        return split_top_level(raw)
    if (section, key) in DICT_KEYS:
        out = {}
        for item in split_top_level(raw):
            name, sep, value = item.partition(":")
            if not sep:
                issues.append(ConfigIssue(f"{section}.{key}: expected name: value, got {item!r}", line))
                continue
            out[name.strip()] = value.strip()
        return out
    return raw


def read_sections(text: str) -> tuple[dict, dict, list[ConfigIssue]]:
    """
    Split config text into {section: {key: value}}.

    Returns:
        (values, line numbers keyed by (section, key) and (section,), issues)
    """
    values: dict[str, dict] = {}
    lines: dict[tuple, int] = {}
    issues: list[ConfigIssue] = []
    section = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        header = _SECTION_RE.match(line)
        if header:
            section = header.group(1).lower()
            if section not in SECTIONS:
                issues.append(
                    ConfigIssue(f"unknown section [{section}]; expected one of {', '.join(SECTIONS)}", number)
                )
                section = "__ignored__"
            lines.setdefault((section,), number)
            values.setdefault(section, {})
            continue
        pair = _KEY_RE.match(line)
        if not pair:
            issues.append(ConfigIssue(f"cannot parse line {raw.strip()!r}", number))
            continue
        if section is None:
            issues.append(ConfigIssue(f"key {pair.group(1)!r} outside of any section", number))
            continue
        if section == "__ignored__":
            continue
        key, raw_value = pair.group(1), pair.group(2).strip()
        if key in values[section]:
            issues.append(ConfigIssue(f"duplicate key {section}.{key}", number))
            continue
        values[section][key] = _parse_value(section, key, raw_value, number, issues)
        lines[(section, key)] = number

    values.pop("__ignored__", None)
    return values, lines, issues


# ============================================
# 2. Nested dict -> RunConfig
# ============================================
def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = {**out[key], **value}
        else:
            out[key] = value
    return out


def _line_for(loc: tuple, lines: dict) -> int | None:
    for size in (2, 1):
        key = tuple(str(part) for part in loc[:size])
        if key in lines:
            return lines[key]
    return None


def _issue_from_error(err: dict, lines: dict) -> ConfigIssue:
    loc = tuple(err.get("loc", ()))
    dotted = ".".join(str(part) for part in loc)
    line = _line_for(loc, lines)
    kind = err.get("type")
    if kind == "missing":
        return ConfigIssue(f"missing required key {dotted}", line)
    if kind == "extra_forbidden":
        return ConfigIssue(f"unknown key {dotted}", line)
    message = err.get("msg", "invalid value").removeprefix("Value error, ")
    return ConfigIssue(f"{dotted}: {message}" if dotted else message, line)


def _to_model_input(values: dict) -> dict:
    run = values.get("run", {})
    data = {k: v for k, v in values.items() if k != "run"}
    data.update(run)
    data.setdefault("name", run.get("scenario") or "run")
    return data


def _check_families(cfg: RunConfig, lines: dict) -> list[ConfigIssue]:
    """Build the metric, flux and initial data once so family errors carry line numbers."""
    # Local import to avoid circular imports
    from mclaw.services.families import FLUX_FAMILIES, METRIC_FAMILIES, initial_data, make_flux, make_metric

    issues = []
    geometry, flux = cfg.geometry, cfg.flux
    if geometry.metric not in METRIC_FAMILIES:
        issues.append(
            ConfigIssue(
                f"unknown metric family {geometry.metric!r}; available: {', '.join(METRIC_FAMILIES)}",
                lines.get(("geometry", "metric")),
            )
        )
    else:
        try:
            make_metric(geometry.metric, geometry.params, geometry.dim)
        except ConfigurationError as e:
            line = lines.get(("geometry", "params"), lines.get(("geometry", "metric")))
            issues.extend(ConfigIssue(i.message, i.line or line) for i in e.issues)

    if flux.family not in FLUX_FAMILIES:
        issues.append(
            ConfigIssue(
                f"unknown flux family {flux.family!r}; available: {', '.join(FLUX_FAMILIES)}",
                lines.get(("flux", "family")),
            )
        )
    else:
        try:
            make_flux(flux.family, flux.params, geometry.dim, flux.profile)
        except ConfigurationError as e:
            line = lines.get(("flux", "params"), lines.get(("flux", "family")))
            issues.extend(ConfigIssue(i.message, i.line or line) for i in e.issues)

    try:
        initial_data(cfg.initial.u0, geometry.dim)
    except ConfigurationError as e:
        issues.extend(ConfigIssue(i.message, lines.get(("initial", "u0"))) for i in e.issues)
    return issues


def parse_config(text: str) -> RunConfig:
    """
    Parse and validate a run configuration.

    Raises:
        ConfigurationError: with every issue found, each with its line number
    """
    values, lines, issues = read_sections(text)

    scenario = values.get("run", {}).get("scenario")
    if scenario:
        # Local import to avoid circular imports
        from mclaw.services.scenarios import SCENARIOS, get_scenario

        if scenario in SCENARIOS:
            base = get_scenario(scenario).model_dump(exclude={"name", "scenario"})
            values = _merge(base, values)
        else:
            issues.append(
                ConfigIssue(
                    f"unknown scenario {scenario!r}; available: {', '.join(SCENARIOS)}",
                    lines.get(("run", "scenario")),
                )
            )

    cfg = None
    try:
        cfg = RunConfig.model_validate(_to_model_input(values))
    except ValidationError as e:
        issues.extend(_issue_from_error(err, lines) for err in e.errors())

    if cfg is not None:
        issues.extend(_check_families(cfg, lines))

    if issues:
        issues.sort(key=lambda i: (i.line is None, i.line or 0))
        logger.debug("config rejected with %s issue(s)", len(issues))
        raise ConfigurationError(issues)
    return cfg


def load_config(path: str | Path) -> RunConfig:
    """
    Read and parse a config file; the run name defaults to the file stem.

    Raises:
        ConfigurationError: unreadable file or invalid content
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"cannot read config {path}: {e}")
    cfg = parse_config(text)
    if "name" not in read_sections(text)[0].get("run", {}):
        cfg = cfg.model_copy(update={"name": path.stem})
    return cfg
