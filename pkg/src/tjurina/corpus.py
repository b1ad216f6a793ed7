"""Built-in test corpus used by ``tjurina selftest`` and the test suite."""

from dataclasses import dataclass

__all__ = ["CORPUS", "CorpusEntry", "entry"]


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    data: dict  # a CurveInput document
    tau: int = None  # None: compare against the oracle only
    note: str = ""


F1 = "(y^3 - x^7)"
F2 = "(y^3 - 3*x^5*y - x^7 - x^8)"
F3 = "(y^4 - 2*x^5*y^2 - 4*x^7*y - x^9 + x^10)"

CORPUS = (
    CorpusEntry("cusp", {"poly": "y^2 - x^3"}, 2, "A2"),
    CorpusEntry("node", {"poly": "x*y"}, 1, "A1"),
    CorpusEntry("tacnode", {"poly": "y^2 - x^4"}, 3, "A3"),
    CorpusEntry("E6", {"poly": "y^3 - x^4"}, 6),
    CorpusEntry("D4", {"poly": "x*y*(x + y)"}, 4, "ordinary triple point"),
    CorpusEntry("parabolas", {"poly": "(y - x^2)*(y + x^2)"}, 3),
    CorpusEntry("branch1", {"poly": F1}, 12),
    CorpusEntry("branches12", {"poly": F1 + "*" + F2}, None),
    CorpusEntry("three_branches", {"poly": "*".join((F1, F2, F3))}, 157),
    CorpusEntry(
        "space_t345",
        {
            "branches": [{"coords": ["t^3", "t^4", "t^5"]}],
            "equations": ["y^2 - x*z", "x^3 - y*z"],
        },
        None,
        "space curve; the Tjurina number is conditional on a complete intersection",
    ),
)


def entry(name):
    for e in CORPUS:
        if e.name == name:
            return e
    raise KeyError(name)
