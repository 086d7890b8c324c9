"""Head-rule engine.

Rule files hold one rule per line (lines starting with ``#`` are
comments)::

    # Collins-style rules
    default left-to-right
    S   left-to-right  VP S SBAR
    NP  right-to-left  NN NNS NP *

Several lines for the same symbol are tried in order. Within a line, each
category is searched for among the children in the given direction before
moving on to the next category; ``*`` matches any child. A terminal's
category is its POS tag. When nothing matches, the first child in the
default direction is the head.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DataError

LEFT_TO_RIGHT = "left-to-right"
RIGHT_TO_LEFT = "right-to-left"
_DIRECTIONS = {
    "left-to-right": LEFT_TO_RIGHT, "left": LEFT_TO_RIGHT, "l": LEFT_TO_RIGHT,
    "right-to-left": RIGHT_TO_LEFT, "right": RIGHT_TO_LEFT, "r": RIGHT_TO_LEFT,
}


@dataclass(frozen=True)
class HeadRuleSet:
    rules: dict = field(default_factory=dict)
    default_direction: str = LEFT_TO_RIGHT

    def find_head(self, symbol: str, categories) -> int:
        """Index of the head among children with the given categories."""
        n = len(categories)
        for direction, priority in self.rules.get(symbol, ()):
            order = range(n) if direction == LEFT_TO_RIGHT else range(n - 1, -1, -1)
            for cat in priority:
                for i in order:
                    if cat == "*" or categories[i] == cat:
                        return i
        return 0 if self.default_direction == LEFT_TO_RIGHT else n - 1


def _direction(word, lineno):
    try:
        return _DIRECTIONS[word.lower()]
    except KeyError:
        raise DataError(f"head rules line {lineno}: unknown direction {word!r}") from None


def parse_head_rules(text: str) -> HeadRuleSet:
    rules = {}
    default = LEFT_TO_RIGHT
    for lineno, line in enumerate(text.splitlines(), 1):
        # only whole-line comments: "#" is a PTB POS tag
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0].lower() == "default":
            if len(parts) != 2:
                raise DataError(f"head rules line {lineno}: expected 'default DIRECTION'")
            default = _direction(parts[1], lineno)
            continue
        if len(parts) < 2:
            raise DataError(f"head rules line {lineno}: expected 'SYMBOL DIRECTION CAT...'")
        rules.setdefault(parts[0], []).append((_direction(parts[1], lineno), tuple(parts[2:])))
    return HeadRuleSet({k: tuple(v) for k, v in rules.items()}, default)


def load_head_rules(path) -> HeadRuleSet:
    with open(path, encoding="utf-8") as f:
        return parse_head_rules(f.read())
