"""Decompose a finitely ambiguous weighted automaton into unambiguous ones.

The route runs through run counting.  ``build_a_geq_k`` tracks k guessed
runs at once, lexicographically ordered, and accepts exactly the words
with at least k accepting runs.  Its complement DFA (``build_a_leq_k``)
caps the count from above, and the product of the two with the weights of
the ell-th tracked run (``build_a_k_ell``) is an unambiguous automaton
whose support is the exactly-k-runs slice.  ``decompose`` stitches the
slices into automata B_1, ..., B_K whose pointwise multiset union is the
original behaviour.
"""

import itertools
from collections import deque

from .automata import (
    FINITELY,
    Nfa,
    UNAMBIGUOUS,
    WeightedAutomaton,
    classify_ambiguity,
    letter_key,
    product,
    state_key,
    trim,
    underlying_nfa,
    weighted_union,
)
from .errors import HypothesisError, InputError
from .fo_compiler import ClassifierDfa, dfa_from_nfa


# -- single initial state ----------------------------------------------------


def ensure_single_initial(a):
    """Equivalent automaton with exactly one initial state.

    The input is returned untouched when it already qualifies.  Otherwise
    a fresh start state fans out to per-origin copies of the first-step
    targets.  The copies keep runs from different initial states distinct,
    so accepting runs (and their weight sequences) are preserved
    one-to-one, which plain target sharing would break.
    """
    nfa = underlying_nfa(a)
    if len(nfa.initial) == 1:
        return a
    tag = "init"
    while any(isinstance(s, tuple) and s[:1] == (tag,) for s in nfa.states):
        tag += "'"
    start = (tag,)
    copies = {(tag, i, q)
              for (i, letter, q) in nfa.transitions if i in nfa.initial}
    trans = set(nfa.transitions)
    for (i, letter, q) in nfa.transitions:
        if i in nfa.initial:
            trans.add((start, letter, (tag, i, q)))
    for (tag_, i, q) in copies:
        for (s, letter, d) in nfa.transitions:
            if s == q:
                trans.add(((tag_, i, q), letter, d))
    final = set(nfa.final) | {c for c in copies if c[2] in nfa.final}
    if nfa.initial & nfa.final:
        final.add(start)
    states = set(nfa.states) | copies | {start}
    out = Nfa(states, nfa.alphabet, trans, {start}, final)
    if not isinstance(a, WeightedAutomaton):
        return out
    wgt = dict(a.wgt)
    for t in out.transitions - nfa.transitions:
        src, letter, dst = t
        if src == start:
            wgt[t] = a.wgt[(dst[1], letter, dst[2])]
        else:
            wgt[t] = a.wgt[(src[2], letter, dst)]
    return WeightedAutomaton(out, {t: wgt[t] for t in out.transitions})


# -- at least / at most k accepting runs -------------------------------------


def build_a_geq_k(a, k) -> Nfa:
    """Automaton accepting the words with at least k accepting runs.

    States are flat tuples: k tracked base states followed by k - 1 order
    bits, bit ell turning 1 once run ell is strictly below run ell + 1 in
    the lexicographic order on state sequences.  The order on base states
    is the canonical sort of the state ids.  Only the part reachable from
    the all-initial tuple is materialized.
    """
    if k < 1:
        raise InputError("run count must be >= 1")
    nfa = underlying_nfa(ensure_single_initial(underlying_nfa(a)))
    (q0,) = nfa.initial
    rank = {s: i for i, s in enumerate(sorted(nfa.states, key=state_key))}
    letters = sorted(nfa.alphabet, key=letter_key)
    start = (q0,) * k + (0,) * (k - 1)
    trans = set()
    seen = {start}
    work = [start]
    while work:
        src = work.pop()
        qs, cs = src[:k], src[k:]
        for letter in letters:
            outs = [nfa.out(qs[ell], letter) for ell in range(k)]
            if any(not o for o in outs):
                continue
            for qs2 in itertools.product(*outs):
                cs2 = []
                for ell in range(k - 1):
                    if cs[ell] == 1:
                        cs2.append(1)
                    elif rank[qs2[ell]] < rank[qs2[ell + 1]]:
                        cs2.append(1)
                    elif qs2[ell] == qs2[ell + 1]:
                        cs2.append(0)
                    else:
                        # equal prefixes may not fall out of order
                        break
                else:
                    dst = qs2 + tuple(cs2)
                    trans.add((src, letter, dst))
                    if dst not in seen:
                        seen.add(dst)
                        work.append(dst)
    final = {s for s in seen
             if all(q in nfa.final for q in s[:k]) and all(s[k:])}
    return Nfa(seen, nfa.alphabet, trans, {start}, final)


def build_a_leq_k(a, k) -> ClassifierDfa:
    """Minimal complete DFA for the words with at most k accepting runs.

    Built as the complement of the at-least-(k + 1) language; F holds the
    accepted words and G the rest, so no word is ever rejected outright.
    """
    if k < 1:
        raise InputError("run count must be >= 1")
    dfa = dfa_from_nfa(build_a_geq_k(a, k + 1))
    swapped = dfa.nfa.with_sets(final=dfa.g, accepting={"G": dfa.f})
    return ClassifierDfa(swapped, dfa.base_alphabet, ())


# -- the ell-th run on the exactly-k slice ------------------------------------


def build_a_k_ell(a: WeightedAutomaton, k, ell) -> WeightedAutomaton:
    """Unambiguous automaton for the ell-th run weight, in lexicographic
    order, on words carrying exactly k accepting runs; empty elsewhere."""
    if not 1 <= ell <= k:
        raise InputError("run index %r out of range 1..%r" % (ell, k))
    norm = ensure_single_initial(a)
    leq = build_a_leq_k(norm.nfa, k)
    geq = build_a_geq_k(norm.nfa, k)
    joint = trim(product(leq.nfa, geq))
    wgt = {}
    for t in joint.transitions:
        (_, src), letter, (_, dst) = t
        wgt[t] = norm.wgt[(src[ell - 1], letter, dst[ell - 1])]
    return WeightedAutomaton(joint, wgt)


# -- ambiguity degree via capped run counting ---------------------------------


def _max_accepting_runs(nfa, cap):
    """Breadth-first search over per-state run-count vectors, entries
    capped at `cap`.  Returns (best, word): the largest accepting-run
    total seen and the first word reaching `cap`, or None.  On a trim
    automaton a None word makes `best` the exact ambiguity degree, since
    a capped count would propagate to some final state and trigger."""
    states = sorted(nfa.states, key=state_key)
    letters = sorted(nfa.alphabet, key=letter_key)
    idx = {s: i for i, s in enumerate(states)}
    finals = [idx[s] for s in states if s in nfa.final]
    pre = {}
    for (s, letter, d) in nfa.transitions:
        pre.setdefault((letter, idx[d]), []).append(idx[s])
    start = tuple(1 if s in nfa.initial else 0 for s in states)
    best = 0
    seen = {start}
    queue = deque([(start, ())])
    while queue:
        vec, word = queue.popleft()
        for letter in letters:
            nxt = tuple(min(cap, sum(vec[i] for i in pre.get((letter, j), ())))
                        for j in range(len(states)))
            acc = sum(nxt[j] for j in finals)
            if acc >= cap:
                return cap, word + (letter,)
            best = max(best, acc)
            if nxt not in seen:
                seen.add(nxt)
                queue.append((nxt, word + (letter,)))
    return best, None


# -- the decomposition ---------------------------------------------------------


def decompose(a: WeightedAutomaton, k=None) -> list:
    """Split into unambiguous automata B_1, ..., B_k whose pointwise
    multiset union equals the behaviour of `a`.

    `k` must bound the number of accepting runs per word; when omitted it
    is detected, which needs the automaton to classify as unambiguous or
    finitely ambiguous.  A failing bound is refused with a witness word.
    """
    nfa = trim(underlying_nfa(a))
    if k is None:
        kind = classify_ambiguity(nfa)
        if kind not in (UNAMBIGUOUS, FINITELY):
            _, word = _max_accepting_runs(nfa, len(nfa.states) + 1)
            raise HypothesisError(
                "ambiguity grows %s; %r already has more than %d "
                "accepting runs" % (kind, "".join(word), len(nfa.states)))
        cap = 2
        while True:
            best, word = _max_accepting_runs(nfa, cap)
            if word is None:
                k = best
                break
            cap *= 2
    else:
        if k < 0:
            raise InputError("ambiguity bound must be >= 0")
        _, word = _max_accepting_runs(nfa, k + 1)
        if word is not None:
            raise HypothesisError(
                "not %d-ambiguous: %r has at least %d accepting runs"
                % (k, "".join(word), k + 1))
    out = []
    for ell in range(1, k + 1):
        slices = [build_a_k_ell(a, j, ell) for j in range(ell, k + 1)]
        b = slices[0]
        for part in slices[1:]:
            b = weighted_union(b, part)
        out.append(b)
    return out
