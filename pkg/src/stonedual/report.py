"""Plain-text check reports: one line per check, PASS or FAIL plus witness."""


class Report:
    def __init__(self, title=""):
        self.title = title
        self.lines = []
        self.data = {}

    def check(self, name, ok, witness=None):
        self.lines.append((bool(ok), name, witness))
        return bool(ok)

    def info(self, name, value):
        # auditable payloads (e.g. the explicit bijection behind an iso verdict)
        self.data[name] = value

    def merge(self, other, prefix=""):
        for ok, name, witness in other.lines:
            self.lines.append((ok, prefix + name, witness))
        for name, value in other.data.items():
            self.data[prefix + name] = value

    @property
    def passed(self):
        return all(ok for ok, _, _ in self.lines)

    def failures(self):
        return [(name, witness) for ok, name, witness in self.lines if not ok]

    def render(self):
        out = []
        if self.title:
            out.append(f"# {self.title}")
        for ok, name, witness in self.lines:
            line = ("PASS " if ok else "FAIL ") + name
            if not ok and witness is not None:
                line += f" witness={format_witness(witness)}"
            out.append(line)
        for name, value in self.data.items():
            out.append(f"INFO {name}={format_witness(value)}")
        return "\n".join(out)

    def __str__(self):
        return self.render()


def format_witness(witness):
    # deterministic, whitespace-free so report lines stay machine-parseable
    if isinstance(witness, tuple):
        return "(" + ",".join(format_witness(w) for w in witness) + ")"
    if isinstance(witness, frozenset):
        return "{" + ",".join(sorted(format_witness(w) for w in witness)) + "}"
    return str(witness).replace(" ", "")
