"""Slow, independent reference implementations the package must agree with.

Everything here favors obviousness over speed: Counter arithmetic, label
propagation to a fixpoint, and raw-sequence enumeration.  Nothing imports
the engine's matching or union-find code paths.
"""
import itertools
from collections import Counter
from typing import Dict, List, Optional, Sequence, Set, Tuple

Entries = Tuple[Tuple[int, ...], ...]


def naive_law_check(table: Sequence[Sequence[Optional[int]]]) -> Dict[str, bool]:
    n = len(table)
    get = lambda x, y: table[x][y]
    total = all(get(x, y) is not None for x in range(n) for y in range(n))
    associative = True
    for x in range(n):
        for y in range(n):
            for z in range(n):
                xy, yz = get(x, y), get(y, z)
                if xy is None or yz is None:
                    continue
                left, right = get(xy, z), get(x, yz)
                if left is None or right is None:
                    continue
                if left != right:
                    associative = False
    # Mirror-cell comparison only where both sides are defined, like the
    # associativity check above.
    commutative = all(
        get(x, y) == get(y, x)
        for x in range(n) for y in range(n)
        if get(x, y) is not None and get(y, x) is not None
    )
    return {"total": total, "associative": associative,
            "commutative": commutative}


def naive_one_step(entries: Entries, rules, max_len: Optional[int]) -> Set[Entries]:
    """All one-rule rewrites of a canonical word, via Counter arithmetic."""
    bag = Counter(entries)
    out: Set[Entries] = set()
    for rule in rules:
        for src, dst in ((rule.left, rule.right), (rule.right, rule.left)):
            need = Counter(src)
            if any(bag[k] < c for k, c in need.items()):
                continue
            rebuilt = bag - need + Counter(dst)
            size = sum(rebuilt.values())
            if size == 0 or (max_len is not None and size > max_len):
                continue
            out.add(tuple(sorted(rebuilt.elements())))
    return out


def naive_partition(words: Sequence[Entries], rules,
                    max_len: Optional[int]) -> List[int]:
    """Label propagation to a fixpoint; labels are least member indices."""
    index = {w: i for i, w in enumerate(words)}
    labels = list(range(len(words)))
    changed = True
    while changed:
        changed = False
        for i, w in enumerate(words):
            for nb in naive_one_step(w, rules, max_len):
                j = index.get(nb)
                if j is None:
                    continue
                a, b = labels[i], labels[j]
                if a != b:
                    lo, hi = min(a, b), max(a, b)
                    for k, lab in enumerate(labels):
                        if lab == hi:
                            labels[k] = lo
                    changed = True
    return labels


def partition_signature(labels: Sequence[int]) -> Set[Tuple[int, ...]]:
    groups: Dict[int, List[int]] = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    return {tuple(g) for g in groups.values()}


def distinct_sorted_count(s: int, h: int) -> int:
    """Distinct sorted length-h sequences over s symbols, by enumeration."""
    return len({tuple(sorted(seq))
                for seq in itertools.product(range(s), repeat=h)})


def naive_left_fold(table, values: Sequence[int]) -> Optional[int]:
    acc = values[0]
    for v in values[1:]:
        if acc is None:
            return None
        acc = table[acc][v]
    return acc
