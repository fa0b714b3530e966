"""Single-edit corruptions of the flu fixture with the exit code each must produce."""

from __future__ import annotations


def _replace(old: str, new: str):
    def edit(text: str) -> str:
        assert old in text
        return text.replace(old, new, 1)

    return edit


def _append(line: str):
    return lambda text: text + line + "\n"


SYNTAX, INVALID = 2, 3

MUTATIONS = [
    ("truncated-feature", _replace("feature infect : flu -> flu", "feature infect : flu -> "), SYNTAX),
    ("missing-probability", _replace("prior flu = 0.001", "prior flu ="), SYNTAX),
    ("unknown-keyword", _replace("culprit flu", "culprits flu"), SYNTAX),
    ("unclosed-bindings", _replace("cond flu -infect-> flu", "cond flu { agent = Bob -infect-> flu"), SYNTAX),
    ("wrong-arrow", _replace("feature sneeze-effect : flu -> sneezing", "feature sneeze-effect : flu => sneezing"), SYNTAX),
    ("missing-operator", _replace("constraint flu : agent != infectee", "constraint flu : agent infectee"), SYNTAX),
    ("stray-character", _append("type fl@u"), SYNTAX),
    ("unterminated-quote", _append('constraint flu : agent = "Bob'), SYNTAX),
    ("missing-colon", _replace("feature infect : flu -> flu", "feature infect flu -> flu"), SYNTAX),
    ("bad-percolate-arrow", _replace("percolate flu.infect : agent => infectee", "percolate flu.infect : agent -> infectee"), SYNTAX),
    ("isa-cycle", _replace("type disease", "type disease isa flu"), INVALID),
    ("probability-range", _replace("prior flu = 0.001", "prior flu = 1.5"), INVALID),
    ("cond-target-mismatch", _replace("cond flu -infect-> flu", "cond flu -infect-> sneezing"), INVALID),
    ("unknown-target", _replace("feature infect : flu -> flu", "feature infect : flu -> flew"), INVALID),
    ("duplicate-feature", _append("feature infect : flu -> flu"), INVALID),
    ("duplicate-type", _append("type flu"), INVALID),
    ("culprit-without-prior", _append("culprit sneezing"), INVALID),
    ("percolate-unknown-feature", _replace("percolate flu.infect", "percolate flu.cough"), INVALID),
    ("constraint-unknown-owner", _replace("constraint flu :", "constraint flue :"), INVALID),
    ("speccond-upward", _append("speccond flu => disease = 0.5"), INVALID),
]
