"""Regenerate docs/defaults.md from the parameter dataclasses.

    python3 scripts/write_defaults.py [output]
"""
import dataclasses
import sys
from pathlib import Path

from natcomp.algorithms import ROSTER, algorithm_class
from natcomp.components import DecaySchedule
from natcomp.taxonomy import METADATA


def describe(value):
    if isinstance(value, DecaySchedule):
        text = f"{value.kind} {value.start:g} -> {value.end:g}"
        return text + (f" (exponent {value.exponent:g})" if value.kind == "nonlinear-power" else "")
    return f"{value:g}" if isinstance(value, float) else str(value)


def bounds(f):
    lo, hi = f.metadata.get("range", (None, None))
    if lo is None and hi is None:
        return ""
    return f"[{'-inf' if lo is None else lo}, {'inf' if hi is None else hi}]"


def render() -> str:
    out = ["# Default parameters", "",
           "Generated by `scripts/write_defaults.py`; do not edit by hand.",
           "Schedules decay over the evaluation budget (t = evaluations used, T = budget).",
           "Override from the CLI with `--param name=value` or `--param schedule.field=value`.", ""]
    for a in ROSTER:
        cls = algorithm_class(a)
        p = cls.Params()
        out += [f"## {a}: {METADATA[a].name}", "", cls.summary, "",
                "| parameter | default | range | meaning |", "|---|---|---|---|"]
        for f in dataclasses.fields(p):
            out.append(f"| `{f.name}` | {describe(getattr(p, f.name))} | {bounds(f)} | {f.metadata.get('doc', '')} |")
        out.append("")
    return "\n".join(out)


if __name__ == "__main__":
    target = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent.parent / "docs" / "defaults.md")
    target.write_text(render())
    print(f"wrote {target}")
