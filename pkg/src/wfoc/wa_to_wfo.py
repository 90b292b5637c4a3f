"""Translate weighted automata back into weighted FO sentences.

Unambiguous-between-two-states automata become a guarded position
product whose step cascade names the transition taken at each position.
SCC-unambiguous automata additionally sum over the switching transitions
between strongly connected components: the switch positions are the only
nondeterminism left, so one variable sum per switch recovers the runs.

Language membership of factors is expressed with run atoms; they denote
the languages the hypotheses make aperiodic, and every construction here
refuses inputs that violate its hypothesis, naming a witness.
"""

from __future__ import annotations

from .automata import (
    WeightedAutomaton, aperiodicity_index, is_scc_unambiguous,
    is_unambiguous, is_unambiguous_between, letter_key, scc_decompose,
    state_key, underlying_nfa,
)
from .errors import HypothesisError, InputError
from .logic.syntax import (
    And, Const, EqVar, FoTrue, LetterAt, Lt, Not, Plus, ProdX, RunAtom,
    StepIte, SumX, WIte, Zero,
)

ATOM_NAME = "A"


def _sorted_transitions(nfa):
    return sorted(nfa.transitions,
                  key=lambda t: (state_key(t[0]), letter_key(t[1]),
                                 state_key(t[2])))


def _conj(parts):
    parts = [p for p in parts if not isinstance(p, FoTrue)]
    if not parts:
        return FoTrue()
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def _plus(parts):
    if not parts:
        return Zero()
    out = parts[0]
    for p in parts[1:]:
        out = Plus(out, p)
    return out


def _require_aperiodic(nfa):
    if aperiodicity_index(nfa) is None:
        raise HypothesisError(
            "automaton is not aperiodic; the translation needs counter-free"
            " transition behavior")


def _witness_word(nfa, start_pairs, end_pairs, within=None):
    """Shortest word along which two distinct runs lead from a start pair
    to an end pair; None if there is none."""
    states = within if within is not None else nfa.states
    letters = sorted(nfa.alphabet, key=letter_key)
    start = sorted(((r, s, r != s) for (r, s) in start_pairs
                    if r in states and s in states),
                   key=lambda x: state_key(x[:2]))
    seen = set(start)
    queue = [(st, ()) for st in start]
    while queue:
        (r, s, distinct), word = queue.pop(0)
        if distinct and (r, s) in end_pairs:
            return word
        for a in letters:
            for r2 in nfa.out(r, a):
                if r2 not in states:
                    continue
                for s2 in nfa.out(s, a):
                    if s2 not in states:
                        continue
                    nxt = (r2, s2, distinct or r2 != s2)
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append((nxt, word + (a,)))
    return None


def lang_sentence(a, p, q, name=ATOM_NAME):
    """Sentence true exactly on the words with a run from p to q; the
    empty factor counts as a run when p = q."""
    nfa = underlying_nfa(a)
    _require_aperiodic(nfa)
    if p not in nfa.states or q not in nfa.states:
        raise InputError("unknown state %r/%r" % (p, q))
    return RunAtom(name, nfa, p, q, None, None)


def _factor_atom(nfa, p, q, lo, hi, name):
    return RunAtom(name, nfa, p, q, lo, hi, bounded=True)


def transition_formula(a, p, q, delta, var="x", name=ATOM_NAME):
    """Open formula true at position var exactly when the word has a run
    from p to q whose var-th transition is delta; needs the automaton to
    be unambiguous from p to q for the exactness part."""
    nfa = underlying_nfa(a)
    (r, letter, s) = delta
    if delta not in nfa.transitions:
        raise InputError("unknown transition %r" % (delta,))
    return _conj([
        _factor_atom(nfa, p, r, None, var, name),
        LetterAt(letter, var),
        _factor_atom(nfa, s, q, var, None, name),
    ])


def _cascade(conditions_weights):
    """Right-nested step cascade; the last else repeats the last weight
    (dead branch, kept for fidelity with the source shape)."""
    if not conditions_weights:
        return Const(0)
    out = Const(conditions_weights[-1][1])
    for cond, w in reversed(conditions_weights):
        out = StepIte(cond, Const(w), out)
    return out


def unambiguous_to_wfo(a: WeightedAutomaton, p, q, name=ATOM_NAME):
    """Guarded position product equal to the p-to-q slice of the
    automaton: the guard is run existence, and the cascade identifies the
    transition the unique run takes at each position."""
    nfa = a.nfa
    _require_aperiodic(nfa)
    if not is_unambiguous_between(nfa, p, q):
        w = _witness_word(nfa, {(p, p)}, {(q, q)})
        raise HypothesisError(
            "not unambiguous from %r to %r: %r has two runs"
            % (p, q, "".join(map(str, w))))
    guard = lang_sentence(a, p, q, name)
    pairs = [(transition_formula(a, p, q, t, "x", name), a.wgt[t])
             for t in _sorted_transitions(nfa)]
    return WIte(guard, ProdX("x", _cascade(pairs)), Zero())


def unambiguous_wa_to_wfo(a: WeightedAutomaton, name=ATOM_NAME):
    """Nested if-then-else over the initial/final pairs; global
    unambiguity makes at most one guard true, so no + is needed."""
    nfa = a.nfa
    _require_aperiodic(nfa)
    if not is_unambiguous(nfa):
        w = _witness_word(nfa, {(i, j) for i in nfa.initial
                                for j in nfa.initial},
                          {(f, g) for f in nfa.final for g in nfa.final})
        raise HypothesisError(
            "not unambiguous: %r has two accepting runs"
            % ("".join(map(str, w)),))
    out = Zero()
    pairs = sorted(((p, q) for p in nfa.initial for q in nfa.final),
                   key=lambda pq: (state_key(pq[0]), state_key(pq[1])))
    for (p, q) in reversed(pairs):
        inner = unambiguous_to_wfo(a, p, q, name)
        out = WIte(inner.cond, inner.then, out)
    return out


def enumerate_switching(a, p, q):
    """All sequences of component-changing transitions a run from p to q
    can take, in a deterministic order.  Each consecutive pair stays in
    one component, so the sequence walks a strictly descending path in
    the component DAG and the enumeration terminates."""
    nfa = underlying_nfa(a)
    scc = scc_decompose(nfa)
    if p not in nfa.states or q not in nfa.states:
        raise InputError("unknown state %r/%r" % (p, q))
    if scc.same(p, q):
        raise HypothesisError(
            "states %r and %r share a component; no switching is involved"
            % (p, q))
    switching = [t for t in _sorted_transitions(nfa)
                 if not scc.same(t[0], t[2])]
    target = scc.component_of[q]
    out = []

    def extend(prefix, comp):
        for t in switching:
            if scc.component_of[t[0]] != comp:
                continue
            nxt = scc.component_of[t[2]]
            if nxt == target:
                out.append(prefix + (t,))
            else:
                extend(prefix + (t,), nxt)

    extend((), scc.component_of[p])
    return sorted(out, key=state_key)


def _switch_vars(m):
    return ["y%d" % i for i in range(1, m + 1)]


def _switching_sentence(a, p, q, seq, name):
    """Sum over the switch positions of a guarded product; the guard pins
    the switching skeleton and the cascade names each position's
    transition relative to its segment."""
    nfa = a.nfa
    scc = scc_decompose(nfa)
    m = len(seq)
    ys = _switch_vars(m)
    comps = [scc.component_of[p]] + [scc.component_of[t[2]] for t in seq]

    guard_parts = []
    for i in range(m - 1):
        guard_parts.append(Lt(ys[i], ys[i + 1]))
    for i, (r, letter, s) in enumerate(seq):
        guard_parts.append(LetterAt(letter, ys[i]))
    guard_parts.append(_factor_atom(nfa, p, seq[0][0], None, ys[0], name))
    for i in range(m - 1):
        guard_parts.append(_factor_atom(nfa, seq[i][2], seq[i + 1][0],
                                        ys[i], ys[i + 1], name))
    guard_parts.append(_factor_atom(nfa, seq[m - 1][2], q, ys[m - 1],
                                    None, name))
    guard = _conj(guard_parts)

    pairs = []
    for t in _sorted_transitions(nfa):
        (r, letter, s) = t
        if t in seq:
            i = seq.index(t)
            cond = EqVar("x", ys[i])
        elif scc.same(r, s) and scc.component_of[r] in comps:
            j = comps.index(scc.component_of[r])
            conj = []
            if j == 0:
                conj.append(Lt("x", ys[0]))
                conj.append(_factor_atom(nfa, p, r, None, "x", name))
                conj.append(LetterAt(letter, "x"))
                conj.append(_factor_atom(nfa, s, seq[0][0], "x", ys[0],
                                         name))
            elif j == m:
                conj.append(Lt(ys[m - 1], "x"))
                conj.append(_factor_atom(nfa, seq[m - 1][2], r, ys[m - 1],
                                         "x", name))
                conj.append(LetterAt(letter, "x"))
                conj.append(_factor_atom(nfa, s, q, "x", None, name))
            else:
                conj.append(Lt(ys[j - 1], "x"))
                conj.append(Lt("x", ys[j]))
                conj.append(_factor_atom(nfa, seq[j - 1][2], r, ys[j - 1],
                                         "x", name))
                conj.append(LetterAt(letter, "x"))
                conj.append(_factor_atom(nfa, s, seq[j][0], "x", ys[j],
                                         name))
            cond = _conj(conj)
        else:
            cond = Not(FoTrue())
        pairs.append((cond, a.wgt[t]))

    body = WIte(guard, ProdX("x", _cascade(pairs)), Zero())
    for y in reversed(ys):
        body = SumX(y, body)
    return body


def scc_unambiguous_to_wfo(a: WeightedAutomaton, name=ATOM_NAME):
    """Sum over initial/final pairs: within one component the unambiguous
    translation applies, across components one summand per switching
    sequence."""
    nfa = a.nfa
    _require_aperiodic(nfa)
    if not is_scc_unambiguous(nfa):
        scc = scc_decompose(nfa)
        for comp in scc.components:
            w = _witness_word(nfa, {(s, s) for s in comp},
                              {(s, s) for s in comp}, within=comp)
            if w is not None:
                raise HypothesisError(
                    "not SCC-unambiguous: %r has two runs inside one"
                    " component" % ("".join(map(str, w)),))
        raise HypothesisError("not SCC-unambiguous")
    pairs = sorted(((p, q) for p in nfa.initial for q in nfa.final),
                   key=lambda pq: (state_key(pq[0]), state_key(pq[1])))
    scc = scc_decompose(nfa)
    parts = []
    for (p, q) in pairs:
        if scc.same(p, q):
            parts.append(unambiguous_to_wfo(a, p, q, name))
        else:
            parts.extend(_switching_sentence(a, p, q, seq, name)
                         for seq in enumerate_switching(a, p, q))
    return _plus(parts)
