"""Language bookkeeping: membership and the next word outside the refinement."""
from __future__ import annotations

from collections import deque
from typing import FrozenSet, List, Optional, Sequence, Union

from .ita import FALSE_STATE, TRUE_STATE, PredicateAutomaton
from .model import ControlFlowAutomaton


def accepts(a: Union[PredicateAutomaton, ControlFlowAutomaton], w: Sequence[str]) -> bool:
    return a.accepts(list(w))


def next_candidate(cfa: ControlFlowAutomaton, r: PredicateAutomaton,
                   max_len: Optional[int] = None) -> Optional[List[str]]:
    """Shortest word of ``cfa`` not accepted by ``r``; ties go to the smallest edge ids.

    Breadth-first search over pairs (location, subset of ``r``'s states).  A
    subset containing the false state is dropped, since the false state is
    absorbing and every extension would be accepted by ``r``.  With
    ``max_len`` only words up to that length are considered.
    """
    start = (cfa.initial, frozenset([TRUE_STATE]))
    if cfa.initial in cfa.accepting:
        return []
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        (loc, macro), path = queue.popleft()
        if max_len is not None and len(path) >= max_len:
            continue
        for e in cfa.outgoing(loc):
            nm = r.step(macro, e.id)
            if FALSE_STATE in nm:
                continue
            state = (e.target, nm)
            if state in seen:
                continue
            word = path + (e.id,)
            if e.target in cfa.accepting:
                return list(word)
            seen.add(state)
            queue.append((state, word))
    return None
