"""
Forbidden-Factor Automaton

Aho-Corasick automaton over the alphabet {s, t} for a finite set of mistake
words. A state is dead when the text read so far ends with a mistake; counting
words that avoid every mistake is a walk over the live states.
"""

import logging
from collections import deque
from typing import Iterable, List

from .errors import ComputationError

logger = logging.getLogger(__name__)

ALPHABET = "st"


class WordAutomaton:
    """Trie of the mistakes plus fail arcs, completed into a DFA on {s, t}."""

    def __init__(self, mistakes: Iterable[str]):
        self.goto: List[List[int]] = [[-1, -1]]
        self.fail: List[int] = [0]
        self.dead: List[bool] = [False]
        for word in mistakes:
            self._insert(word)
        self._build_fail_arcs()
        logger.debug(f"Word automaton: {len(self.goto)} states")

    @property
    def size(self) -> int:
        return len(self.goto)

    def _insert(self, word: str) -> None:
        if not word or set(word) - set(ALPHABET):
            raise ComputationError(f"Mistake {word!r} is not a nonempty word over {{s, t}}")
        node = 0
        for char in word:
            c = ALPHABET.index(char)
            if self.goto[node][c] == -1:
                self.goto[node][c] = len(self.goto)
                self.goto.append([-1, -1])
                self.fail.append(0)
                self.dead.append(False)
            node = self.goto[node][c]
        self.dead[node] = True

    def _build_fail_arcs(self) -> None:
        # breadth first; missing arcs are filled in with the fail state's arc
        queue = deque()
        for c in range(2):
            child = self.goto[0][c]
            if child == -1:
                self.goto[0][c] = 0
            else:
                self.fail[child] = 0
                queue.append(child)
        while queue:
            node = queue.popleft()
            if self.dead[self.fail[node]]:
                self.dead[node] = True
            for c in range(2):
                child = self.goto[node][c]
                if child == -1:
                    self.goto[node][c] = self.goto[self.fail[node]][c]
                else:
                    self.fail[child] = self.goto[self.fail[node]][c]
                    queue.append(child)

    def accepts(self, word: str) -> bool:
        """True when word contains no mistake as a factor."""
        node = 0
        for char in word:
            node = self.goto[node][ALPHABET.index(char)]
            if self.dead[node]:
                return False
        return True

    def count_up_to(self, n: int) -> List[int]:
        """Number of mistake-free words of every length 0..n."""
        if n < 0:
            raise ComputationError("Word length must be nonnegative")
        live = [i for i in range(self.size) if not self.dead[i]]
        arcs = [
            (i, [self.goto[i][c] for c in range(2) if not self.dead[self.goto[i][c]]])
            for i in live
        ]
        counts = [0] * self.size
        counts[0] = 1
        totals = [1]
        for _ in range(n):
            nxt = [0] * self.size
            for i, targets in arcs:
                ways = counts[i]
                if ways:
                    for j in targets:
                        nxt[j] += ways
            counts = nxt
            totals.append(sum(counts))
        return totals

    def count(self, n: int) -> int:
        return self.count_up_to(n)[n]
