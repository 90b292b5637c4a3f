"""Non-deterministic and weighted automata.

Run enumeration, multiset semantics, strongly connected components,
ambiguity classification, aperiodicity analysis, and the closure
constructions (synchronous product, disjoint union, trim).

All values are immutable after construction and every operation is a pure
function of its inputs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import InputError
from .multiset import SeqMultiset
from .weights import is_weight


def state_key(s):
    """Deterministic total order over heterogeneous state/letter ids."""
    if isinstance(s, bool):
        return (0, int(s))
    if isinstance(s, int):
        return (1, s)
    if isinstance(s, str):
        return (2, s)
    if isinstance(s, tuple):
        return (3, tuple(state_key(x) for x in s))
    if isinstance(s, frozenset):
        return (4, tuple(sorted(state_key(x) for x in s)))
    return (5, repr(s))


letter_key = state_key


class Nfa:
    """A non-deterministic automaton (Q, Sigma, Delta, I, F) plus optional
    named extra accepting sets."""

    __slots__ = ("states", "alphabet", "transitions", "initial", "final",
                 "accepting", "_out", "_into", "_hash")

    def __init__(self, states, alphabet, transitions, initial, final,
                 accepting=None):
        self.states = frozenset(states)
        self.alphabet = frozenset(alphabet)
        self.transitions = frozenset(transitions)
        self.initial = frozenset(initial)
        self.final = frozenset(final)
        acc = {}
        for name, group in (accepting or {}).items():
            acc[name] = frozenset(group)
        self.accepting = acc
        self._out = None
        self._into = None
        self._hash = None
        self._validate()

    def _validate(self):
        for t in self.transitions:
            if len(t) != 3:
                raise InputError("malformed transition %r" % (t,))
            src, letter, dst = t
            if src not in self.states or dst not in self.states:
                raise InputError("transition %r uses undeclared state" % (t,))
            if letter not in self.alphabet:
                raise InputError("transition %r uses undeclared letter" % (t,))
        for group in (self.initial, self.final, *self.accepting.values()):
            if not group <= self.states:
                raise InputError("accepting/initial set outside states")

    # -- derived lookup tables (built lazily, never mutated afterwards) --

    def out(self, src, letter):
        if self._out is None:
            table = {}
            for (s, a, d) in self.transitions:
                table.setdefault((s, a), []).append(d)
            for k in table:
                table[k].sort(key=state_key)
            self._out = table
        return self._out.get((src, letter), [])

    def into(self, dst, letter):
        if self._into is None:
            table = {}
            for (s, a, d) in self.transitions:
                table.setdefault((d, a), []).append(s)
            for k in table:
                table[k].sort(key=state_key)
            self._into = table
        return self._into.get((dst, letter), [])

    def with_sets(self, initial=None, final=None, accepting=None):
        return Nfa(self.states, self.alphabet, self.transitions,
                   self.initial if initial is None else initial,
                   self.final if final is None else final,
                   self.accepting if accepting is None else accepting)

    def _canon(self):
        return (self.states, self.alphabet, self.transitions, self.initial,
                self.final, frozenset((k, v) for k, v in self.accepting.items()))

    def __eq__(self, other):
        if not isinstance(other, Nfa):
            return NotImplemented
        return self._canon() == other._canon()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._canon())
        return self._hash

    def __repr__(self):
        return "Nfa(%d states, %d transitions)" % (
            len(self.states), len(self.transitions))


class WeightedAutomaton:
    """An Nfa together with a total weight map on its transitions."""

    __slots__ = ("nfa", "wgt", "_hash")

    def __init__(self, nfa: Nfa, wgt):
        self.nfa = nfa
        wgt = dict(wgt)
        if set(wgt) != set(nfa.transitions):
            raise InputError("weight map must cover exactly the transitions")
        for w in wgt.values():
            if not is_weight(w):
                raise InputError("bad weight %r" % (w,))
        self.wgt = wgt
        self._hash = None

    states = property(lambda self: self.nfa.states)
    alphabet = property(lambda self: self.nfa.alphabet)
    transitions = property(lambda self: self.nfa.transitions)
    initial = property(lambda self: self.nfa.initial)
    final = property(lambda self: self.nfa.final)

    def __eq__(self, other):
        if not isinstance(other, WeightedAutomaton):
            return NotImplemented
        return self.nfa == other.nfa and self.wgt == other.wgt

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nfa, frozenset(self.wgt.items())))
        return self._hash

    def __repr__(self):
        return "WeightedAutomaton(%d states, %d transitions)" % (
            len(self.nfa.states), len(self.nfa.transitions))


def underlying_nfa(a):
    return a.nfa if isinstance(a, WeightedAutomaton) else a


@dataclass(frozen=True)
class Run:
    """A run: start state plus a chain of transitions with matching
    endpoints.  The empty chain is the empty run from start to start."""

    start: object
    trans: tuple

    def __post_init__(self):
        prev = self.start
        for (src, _, dst) in self.trans:
            if src != prev:
                raise InputError("transition endpoints do not chain")
            prev = dst

    @property
    def end(self):
        return self.trans[-1][2] if self.trans else self.start

    @property
    def label(self):
        return tuple(a for (_, a, _) in self.trans)

    @property
    def state_sequence(self):
        return (self.start,) + tuple(d for (_, _, d) in self.trans)

    def weights(self, wa: WeightedAutomaton):
        return tuple(wa.wgt[t] for t in self.trans)


def enumerate_runs(a, p, q, word):
    """All runs from p to q labeled by word, deterministically ordered.

    The empty word is allowed only for p = q and yields the empty run.
    """
    nfa = underlying_nfa(a)
    if p not in nfa.states or q not in nfa.states:
        raise InputError("unknown state")
    word = tuple(word)
    for letter in word:
        if letter not in nfa.alphabet:
            raise InputError("unknown letter %r" % (letter,))
    if not word:
        if p != q:
            raise InputError("empty word requires p = q")
        return [Run(p, ())]
    runs = []

    def walk(state, i, acc):
        if i == len(word):
            if state == q:
                runs.append(Run(p, tuple(acc)))
            return
        for dst in nfa.out(state, word[i]):
            acc.append((state, word[i], dst))
            walk(dst, i + 1, acc)
            acc.pop()

    walk(p, 0, [])
    runs.sort(key=lambda r: tuple(state_key(s) for s in r.state_sequence))
    return runs


def count_accepting_runs(a, word):
    nfa = underlying_nfa(a)
    word = tuple(word)
    if not word:
        raise InputError("semantics is defined on non-empty words only")
    counts = {s: 1 for s in nfa.initial}
    for letter in word:
        nxt = {}
        for s, n in counts.items():
            for d in nfa.out(s, letter):
                nxt[d] = nxt.get(d, 0) + n
        counts = nxt
    return sum(n for s, n in counts.items() if s in nfa.final)


def abstract_semantics(wa: WeightedAutomaton, word) -> SeqMultiset:
    """Multiset of weight sequences of accepting runs on a non-empty word."""
    word = tuple(word)
    if not word:
        raise InputError("semantics is defined on non-empty words only")
    nfa = wa.nfa
    for letter in word:
        if letter not in nfa.alphabet:
            raise InputError("unknown letter %r" % (letter,))
    # state -> {weight prefix tuple -> count}
    front = {s: {(): 1} for s in nfa.initial}
    for letter in word:
        nxt = {}
        for s, seqs in front.items():
            for d in nfa.out(s, letter):
                w = wa.wgt[(s, letter, d)]
                bucket = nxt.setdefault(d, {})
                for seq, n in seqs.items():
                    key = seq + (w,)
                    bucket[key] = bucket.get(key, 0) + n
        front = nxt
    out = {}
    for s, seqs in front.items():
        if s in nfa.final:
            for seq, n in seqs.items():
                out[seq] = out.get(seq, 0) + n
    return SeqMultiset(out)


def pair_semantics(wa: WeightedAutomaton, p, q, word) -> SeqMultiset:
    return SeqMultiset([r.weights(wa) for r in enumerate_runs(wa, p, q, word)])


def accepts(a, word) -> bool:
    nfa = underlying_nfa(a)
    current = set(nfa.initial)
    for letter in word:
        current = {d for s in current for d in nfa.out(s, letter)}
        if not current:
            return False
    return bool(current & nfa.final)


def words_upto(alphabet, maxlen):
    """All non-empty words up to maxlen, deterministic order."""
    letters = sorted(alphabet, key=letter_key)
    for n in range(1, maxlen + 1):
        for word in itertools.product(letters, repeat=n):
            yield word


def language_upto(a, maxlen):
    return {w for w in words_upto(underlying_nfa(a).alphabet, maxlen)
            if accepts(a, w)}


# -- strongly connected components -----------------------------------------


@dataclass(frozen=True)
class SccDecomposition:
    component_of: dict       # state -> component id
    components: tuple        # id -> frozenset of states
    dag_edges: frozenset     # (cid, cid') edges between distinct components

    def same(self, p, q) -> bool:
        return self.component_of[p] == self.component_of[q]


def scc_decompose(a) -> SccDecomposition:
    """Tarjan, iterative; component ids are assigned in topological order
    (sources first) with deterministic tie-breaking."""
    nfa = underlying_nfa(a)
    order = sorted(nfa.states, key=state_key)
    succ = {s: [] for s in nfa.states}
    for (s, _, d) in sorted(nfa.transitions,
                            key=lambda t: (state_key(t[0]), letter_key(t[1]),
                                           state_key(t[2]))):
        if d not in succ[s]:
            succ[s].append(d)

    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = itertools.count()

    for root in order:
        if root in index:
            continue
        work = [(root, iter(succ[root]))]
        index[root] = low[root] = next(counter)
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = next(counter)
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(succ[child])))
                    advanced = True
                    break
                if child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = set()
                while True:
                    s = stack.pop()
                    on_stack.discard(s)
                    comp.add(s)
                    if s == node:
                        break
                comps.append(frozenset(comp))

    # Tarjan emits components in reverse topological order; flip it and
    # re-sort ties deterministically per topological layer.
    comps.reverse()
    comp_of_tmp = {}
    for i, comp in enumerate(comps):
        for s in comp:
            comp_of_tmp[s] = i
    edges = set()
    for (s, _, d) in nfa.transitions:
        ci, cj = comp_of_tmp[s], comp_of_tmp[d]
        if ci != cj:
            edges.add((ci, cj))
    # topological renumber with stable tie-break by smallest member key
    remaining = set(range(len(comps)))
    indeg = {i: 0 for i in remaining}
    for (i, j) in edges:
        indeg[j] += 1
    final_order = []
    while remaining:
        ready = [i for i in remaining if indeg[i] == 0]
        ready.sort(key=lambda i: min(state_key(s) for s in comps[i]))
        pick = ready[0]
        final_order.append(pick)
        remaining.discard(pick)
        for (i, j) in edges:
            if i == pick and j in remaining:
                indeg[j] -= 1
    renum = {old: new for new, old in enumerate(final_order)}
    components = tuple(comps[old] for old in final_order)
    component_of = {s: renum[comp_of_tmp[s]] for s in comp_of_tmp}
    dag_edges = frozenset((renum[i], renum[j]) for (i, j) in edges)
    return SccDecomposition(component_of, components, dag_edges)


# -- ambiguity --------------------------------------------------------------


def _square_edges(nfa, states1, states2):
    """Synchronized pairs over the given state restrictions."""
    edges = {}
    for (s, a, d) in nfa.transitions:
        if s in states1 and d in states1:
            edges.setdefault((s, a), []).append(d)
    return edges


def _reachable_pairs(nfa, start_pairs, allowed):
    seen = set(start_pairs)
    work = list(start_pairs)
    while work:
        (r, s) = work.pop()
        for a in nfa.alphabet:
            for r2 in nfa.out(r, a):
                if r2 not in allowed:
                    continue
                for s2 in nfa.out(s, a):
                    if s2 not in allowed:
                        continue
                    if (r2, s2) not in seen:
                        seen.add((r2, s2))
                        work.append((r2, s2))
    return seen


def _coreachable_pairs(nfa, end_pairs, allowed):
    seen = set(end_pairs)
    work = list(end_pairs)
    while work:
        (r, s) = work.pop()
        for a in nfa.alphabet:
            for r0 in nfa.into(r, a):
                if r0 not in allowed:
                    continue
                for s0 in nfa.into(s, a):
                    if s0 not in allowed:
                        continue
                    if (r0, s0) not in seen:
                        seen.add((r0, s0))
                        work.append((r0, s0))
    return seen


def is_unambiguous(a) -> bool:
    """At most one accepting run per word (square-product check)."""
    return ambiguity_witness_pair(a) is None


def ambiguity_witness_pair(a):
    """An off-diagonal square state on an accepting path, or None."""
    nfa = underlying_nfa(a)
    starts = {(i, j) for i in nfa.initial for j in nfa.initial}
    ends = {(p, q) for p in nfa.final for q in nfa.final}
    fwd = _reachable_pairs(nfa, starts, nfa.states)
    bwd = _coreachable_pairs(nfa, ends, nfa.states)
    both = [(r, s) for (r, s) in fwd & bwd if r != s]
    if not both:
        return None
    both.sort(key=lambda rs: (state_key(rs[0]), state_key(rs[1])))
    return both[0]


def is_unambiguous_between(a, p, q) -> bool:
    """At most one run from p to q per word."""
    nfa = underlying_nfa(a)
    fwd = _reachable_pairs(nfa, {(p, p)}, nfa.states)
    bwd = _coreachable_pairs(nfa, {(q, q)}, nfa.states)
    return not any(r != s for (r, s) in fwd & bwd)


def is_scc_unambiguous(a) -> bool:
    """Unambiguous between every pair of states of a common SCC, decided by
    pair reachability restricted within each component."""
    nfa = underlying_nfa(a)
    scc = scc_decompose(nfa)
    for comp in scc.components:
        diag = {(s, s) for s in comp}
        fwd = _reachable_pairs(nfa, diag, comp)
        bwd = _coreachable_pairs(nfa, diag, comp)
        if any(r != s for (r, s) in fwd & bwd):
            return False
    return True


def _has_same_word_loop_ladder(nfa) -> bool:
    """Distinct p != q with a common word looping p->p, going p->q and
    looping q->q (triple-product reachability)."""
    scc = scc_decompose(nfa)
    states = sorted(nfa.states, key=state_key)
    # q must be reachable from p for the pattern to exist at all
    reach = {s: {s} for s in states}
    changed = True
    while changed:
        changed = False
        for (s, _, d) in nfa.transitions:
            before = len(reach[s])
            reach[s] |= reach[d]
            if len(reach[s]) != before:
                changed = True
    for p in states:
        for q in states:
            if p == q or q not in reach[p]:
                continue
            # loops stay inside the SCCs of p and q
            comp_p = scc.components[scc.component_of[p]]
            comp_q = scc.components[scc.component_of[q]]
            if len(comp_p) == 1 and not any(
                    t[0] == p and t[2] == p for t in nfa.transitions):
                continue
            if len(comp_q) == 1 and not any(
                    t[0] == q and t[2] == q for t in nfa.transitions):
                continue
            start = (p, p, q)
            target = (p, q, q)
            seen = {start}
            work = [start]
            found = False
            while work and not found:
                (r1, r2, r3) = work.pop()
                for a in nfa.alphabet:
                    for d1 in nfa.out(r1, a):
                        if d1 not in comp_p:
                            continue
                        for d2 in nfa.out(r2, a):
                            for d3 in nfa.out(r3, a):
                                if d3 not in comp_q:
                                    continue
                                nxt = (d1, d2, d3)
                                if nxt == target:
                                    found = True
                                if nxt not in seen:
                                    seen.add(nxt)
                                    work.append(nxt)
            if found:
                return True
    return False


UNAMBIGUOUS = "unambiguous"
FINITELY = "finitely"
POLYNOMIALLY = "polynomially"
EXPONENTIALLY = "exponentially"


def classify_ambiguity(a) -> str:
    """Least ambiguity class of a trimmed automaton.

    Structural criteria only: square product for unambiguity, pair
    reachability inside SCCs for the polynomial frontier, the same-word
    loop ladder for the finite frontier.
    """
    nfa = trim(underlying_nfa(a))
    if is_unambiguous(nfa):
        return UNAMBIGUOUS
    if not is_scc_unambiguous(nfa):
        return EXPONENTIALLY
    if _has_same_word_loop_ladder(nfa):
        return POLYNOMIALLY
    return FINITELY


def ambiguity_degree_bounded(a, maxlen) -> int:
    """Exact max number of accepting runs over all words up to maxlen."""
    nfa = underlying_nfa(a)
    if maxlen < 1:
        raise InputError("length bound must be >= 1")
    best = 0
    front = {(): {s: 1 for s in nfa.initial}}
    for _ in range(maxlen):
        nxt = {}
        for word, counts in front.items():
            for letter in sorted(nfa.alphabet, key=letter_key):
                bucket = {}
                for s, n in counts.items():
                    for d in nfa.out(s, letter):
                        bucket[d] = bucket.get(d, 0) + n
                if bucket:
                    nxt[word + (letter,)] = bucket
                    acc = sum(n for s, n in bucket.items() if s in nfa.final)
                    best = max(best, acc)
        front = nxt
        if not front:
            break
    return best


# -- aperiodicity -----------------------------------------------------------


def _bool_matrices(nfa):
    order = sorted(nfa.states, key=state_key)
    pos = {s: i for i, s in enumerate(order)}
    mats = {}
    for a in sorted(nfa.alphabet, key=letter_key):
        rows = [0] * len(order)
        for (s, letter, d) in nfa.transitions:
            if letter == a:
                rows[pos[s]] |= 1 << pos[d]
        mats[a] = tuple(rows)
    return mats


def _mat_mul(m1, m2):
    n = len(m1)
    out = []
    for i in range(n):
        row = 0
        bits = m1[i]
        j = 0
        while bits:
            if bits & 1:
                row |= m2[j]
            bits >>= 1
            j += 1
        out.append(row)
    return tuple(out)


def transition_monoid(nfa):
    """Closure of the per-letter boolean matrices under composition."""
    gens = list(_bool_matrices(nfa).values())
    if not gens:
        return set()
    seen = set(gens)
    work = list(gens)
    while work:
        m = work.pop()
        for g in gens:
            prod = _mat_mul(m, g)
            if prod not in seen:
                seen.add(prod)
                work.append(prod)
    return seen


def aperiodicity_index(a):
    """Least m >= 1 with e^m = e^(m+1) for every transition-monoid element,
    or None when some element never stabilizes (period > 1)."""
    nfa = underlying_nfa(a)
    monoid = transition_monoid(nfa)
    if not monoid:
        return 1
    bound = len(monoid) + 1
    worst = 1
    for e in monoid:
        power = e
        t = 1
        while t <= bound:
            nxt = _mat_mul(power, e)
            if nxt == power:
                break
            power = nxt
            t += 1
        else:
            return None
        worst = max(worst, t)
    return worst


# -- closure constructions --------------------------------------------------


def product(a: Nfa, b: Nfa, initial=None, final=None) -> Nfa:
    """Synchronous product on pair states.  Initial/final default to the
    cross products; callers may supply either set explicitly."""
    if a.alphabet != b.alphabet:
        raise InputError("product requires a common alphabet")
    states = {(p, q) for p in a.states for q in b.states}
    transitions = set()
    by_letter_b = {}
    for (s, letter, d) in b.transitions:
        by_letter_b.setdefault(letter, []).append((s, d))
    for (p, letter, p2) in a.transitions:
        for (q, q2) in by_letter_b.get(letter, ()):
            transitions.add(((p, q), letter, (p2, q2)))
    if initial is None:
        initial = {(p, q) for p in a.initial for q in b.initial}
    if final is None:
        final = {(p, q) for p in a.final for q in b.final}
    return Nfa(states, a.alphabet, transitions, initial, final)


def disjoint_union(a: Nfa, b: Nfa) -> Nfa:
    """State-disjoint union with deterministic 0/1 tags."""
    if a.alphabet != b.alphabet:
        raise InputError("union requires a common alphabet")
    st = {(0, s) for s in a.states} | {(1, s) for s in b.states}
    tr = {((0, s), l, (0, d)) for (s, l, d) in a.transitions} | \
         {((1, s), l, (1, d)) for (s, l, d) in b.transitions}
    init = {(0, s) for s in a.initial} | {(1, s) for s in b.initial}
    fin = {(0, s) for s in a.final} | {(1, s) for s in b.final}
    return Nfa(st, a.alphabet, tr, init, fin)


def weighted_union(a: WeightedAutomaton, b: WeightedAutomaton) -> WeightedAutomaton:
    nfa = disjoint_union(a.nfa, b.nfa)
    wgt = {((0, s), l, (0, d)): w for (s, l, d), w in a.wgt.items()}
    wgt.update({((1, s), l, (1, d)): w for (s, l, d), w in b.wgt.items()})
    return WeightedAutomaton(nfa, wgt)


def reachable_states(nfa: Nfa):
    seen = set(nfa.initial)
    work = list(nfa.initial)
    while work:
        s = work.pop()
        for a in nfa.alphabet:
            for d in nfa.out(s, a):
                if d not in seen:
                    seen.add(d)
                    work.append(d)
    return seen


def coreachable_states(nfa: Nfa):
    seen = set(nfa.final)
    work = list(nfa.final)
    while work:
        s = work.pop()
        for a in nfa.alphabet:
            for p in nfa.into(s, a):
                if p not in seen:
                    seen.add(p)
                    work.append(p)
    return seen


def restrict(nfa: Nfa, keep) -> Nfa:
    keep = set(keep)
    return Nfa(keep, nfa.alphabet,
               {t for t in nfa.transitions if t[0] in keep and t[2] in keep},
               nfa.initial & keep, nfa.final & keep,
               {k: v & keep for k, v in nfa.accepting.items()})


def trim(a):
    """Restriction to states both reachable and co-reachable."""
    nfa = underlying_nfa(a)
    keep = reachable_states(nfa) & coreachable_states(nfa)
    trimmed = restrict(nfa, keep)
    if isinstance(a, WeightedAutomaton):
        wgt = {t: a.wgt[t] for t in trimmed.transitions}
        return WeightedAutomaton(trimmed, wgt)
    return trimmed
