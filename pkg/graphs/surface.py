import logging
from typing import Dict, List, Tuple

import numpy as np

from .errors import ArgumentError, NotFoundError

logger = logging.getLogger(__name__)

ALPHABET = 'abcdABCD'
RELATOR = 'abABcdCD'
IDENTITY = '1'
# SL(2, F_p) image used to bucket candidate words; a, b, c, d -> A, B, B, A
PRIME = 10007
_MATRICES = {
    'a': np.array([[1, 2], [0, 1]], dtype=np.int64),
    'b': np.array([[1, 0], [2, 1]], dtype=np.int64),
}
_MATRICES['c'] = _MATRICES['b']
_MATRICES['d'] = _MATRICES['a']
for _letter in 'abcd':
    _m = _MATRICES[_letter]
    _MATRICES[_letter.upper()] = np.array([[_m[1, 1], -_m[0, 1]], [-_m[1, 0], _m[0, 0]]], dtype=np.int64) % PRIME
_ORDER = {x: i for i, x in enumerate(ALPHABET)}


def inverse(word: str) -> str:
    return word[::-1].swapcase()


def free_reduce(word: str) -> str:
    out: List[str] = []
    for x in word:
        if out and out[-1] == x.swapcase():
            out.pop()
        else:
            out.append(x)
    return ''.join(out)


def _dehn_table() -> Dict[int, Dict[str, str]]:
    words = set()
    for r in (RELATOR, inverse(RELATOR)):
        for k in range(len(r)):
            words.add(r[k:] + r[:k])
    table = {length: {} for length in range(len(RELATOR) // 2 + 1, len(RELATOR) + 1)}
    for w in sorted(words):
        for length in table:
            table[length][w[:length]] = inverse(w[length:])
    return table


_DEHN = _dehn_table()


def dehn_reduce(word: str) -> str:
    """
    Dehn's algorithm: replace any subword that is more than half of a cyclic
    conjugate of the relator (or its inverse) by the shorter complement, repeat
    """
    w = free_reduce('' if word == IDENTITY else word)
    changed = True
    while changed:
        changed = False
        for i in range(len(w)):
            for length in sorted(_DEHN, reverse=True):
                piece = w[i:i + length]
                if len(piece) == length and piece in _DEHN[length]:
                    w = free_reduce(w[:i] + _DEHN[length][piece] + w[i + length:])
                    changed = True
                    break
            if changed:
                break
    return w


class SurfaceGroup:
    """
    Genus two surface group <a, b, c, d | [a,b][c,d]> with canonical element ids.
    The canonical id of an element is its shortlex-least geodesic word (letters
    ordered as in ALPHABET), the identity is "1". Spheres are generated level by level:

    - levels: list of spheres, each a dict canonical word -> bucket key
    - buckets: per level, bucket key -> canonical words sharing the invariant
    """

    def __init__(self):
        self.levels: List[Dict[str, tuple]] = [{'': self._key_of(np.identity(2, dtype=np.int64), (0, 0, 0, 0))}]
        self.buckets: List[Dict[tuple, List[str]]] = [{self.levels[0]['']: ['']}]
        self._matrix = {'': np.identity(2, dtype=np.int64)}
        self._abel = {'': (0, 0, 0, 0)}

    @staticmethod
    def _key_of(matrix, abel) -> tuple:
        return abel, tuple(int(x) for x in (matrix % PRIME).flatten())

    @staticmethod
    def equal(u: str, v: str) -> bool:
        u = '' if u == IDENTITY else u
        v = '' if v == IDENTITY else v
        return dehn_reduce(u + inverse(v)) == ''

    def _step(self, word: str, x: str):
        matrix = (self._matrix[word] @ _MATRICES[x]) % PRIME
        abel = list(self._abel[word])
        abel[_ORDER[x] % 4] += 1 if x.islower() else -1
        return matrix, tuple(abel)

    def _grow(self):
        n = len(self.levels) - 1
        level: Dict[str, tuple] = {}
        buckets: Dict[tuple, List[str]] = {}
        previous = self.buckets[n - 1] if n >= 1 else {}
        for q in sorted(self.levels[n], key=lambda w: [_ORDER[x] for x in w]):
            for x in ALPHABET:
                if q and q[-1] == x.swapcase():
                    continue
                w = q + x
                matrix, abel = self._step(q, x)
                key = self._key_of(matrix, abel)
                if any(self.equal(w, u) for u in previous.get(key, [])):
                    continue
                if any(self.equal(w, u) for u in buckets.get(key, [])):
                    continue
                level[w] = key
                buckets.setdefault(key, []).append(w)
                self._matrix[w] = matrix
                self._abel[w] = abel
        self.levels.append(level)
        self.buckets.append(buckets)
        logger.debug(f"surface group sphere {n + 1}: {len(level)} elements")

    def ensure(self, n: int):
        while len(self.levels) <= n:
            self._grow()

    def sphere_sizes(self, r: int) -> List[int]:
        self.ensure(r)
        return [len(self.levels[n]) for n in range(r + 1)]

    def neighbors(self, v: str) -> Tuple[str, ...]:
        """
        Canonical ids of v·x for x in ALPHABET, in that order
        """
        word = '' if v == IDENTITY else v
        if any(x not in ALPHABET for x in word):
            raise ArgumentError(f"{v!r} is not a word in {ALPHABET}")
        n = len(word)
        self.ensure(n + 1)
        if word not in self.levels[n]:
            raise NotFoundError(f"{v!r} is not a canonical surface group word")
        out = []
        for x in ALPHABET:
            w = word + x
            matrix, abel = self._step(word, x)
            key = self._key_of(matrix, abel)
            found = None
            for m in (n - 1, n + 1):
                if m < 0:
                    continue
                found = next((u for u in self.buckets[m].get(key, []) if self.equal(w, u)), None)
                if found is not None:
                    break
            assert found is not None, f"no canonical form for {w}"
            out.append(found or IDENTITY)
        return tuple(out)

    def canonical(self, word: str) -> str:
        """
        Canonical id of an arbitrary word, by walking it letter by letter from the identity
        """
        v = IDENTITY
        for x in free_reduce('' if word == IDENTITY else word):
            if x not in ALPHABET:
                raise ArgumentError(f"{word!r} is not a word in {ALPHABET}")
            v = self.neighbors(v)[ALPHABET.index(x)]
        return v
