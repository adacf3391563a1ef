"""Deterministic text reports: one machine-parseable record per check
plus a summary block.  Given identical config and seed the rendered
report is byte-identical, so timing never goes into the body (runtimes
are reported on stderr by the CLI instead)."""

from __future__ import annotations


def _fmt_value(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


class Report:
    def __init__(self, version, config):
        self.version = version
        self.config = dict(config)
        self.records = []

    def add(self, name, statement, passed, **counts):
        """One check record; `statement` is the exact mathematical claim
        being tested, rendered verbatim."""
        self.records.append({
            "name": name,
            "statement": statement,
            "passed": bool(passed),
            "counts": dict(counts),
        })
        return passed

    @property
    def all_passed(self):
        return all(r["passed"] for r in self.records)

    def render(self):
        lines = [f"usylow report v{self.version}", "config:"]
        for key in sorted(self.config):
            lines.append(f"  {key} = {_fmt_value(self.config[key])}")
        for rec in self.records:
            lines.append(f"check: {rec['name']}")
            lines.append(f"  statement: {rec['statement']}")
            lines.append(f"  status: {'pass' if rec['passed'] else 'FAIL'}")
            for key in sorted(rec["counts"]):
                lines.append(f"  {key} = {_fmt_value(rec['counts'][key])}")
        lines.append("summary:")
        lines.append(f"  checks = {len(self.records)}")
        lines.append(f"  passed = {sum(1 for r in self.records if r['passed'])}")
        lines.append(f"  verdict = {'pass' if self.all_passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def write(self, path):
        with open(path, "w") as fh:
            fh.write(self.render())
