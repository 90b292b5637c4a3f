"""Compile weighted FO sentences into weighted automata.

The pipeline follows the structure of the formula: a guess-and-verify
step transducer per FO condition, a synchronous product weighted by the
if-then-else cascade for the position product, a classifier product for
the weighted if-then-else, disjoint union for +, and a two-copy
projection for the variable sum.  Outputs are aperiodic and
SCC-unambiguous; without variable sums they are finite unions of
unambiguous automata, and without sums at all they are unambiguous.
"""

from __future__ import annotations

from .automata import (
    Nfa, WeightedAutomaton, letter_key, reachable_states, restrict,
    weighted_union,
)
from .errors import InputError
from .fo_compiler import compile_fo
from .logic.encoding import ext_alphabet
from .logic.syntax import (
    Const, FoTrue, Not, Plus, ProdX, StepIte, SumX, WIte, Zero,
    fo_conditions, free_vars, uses_sumx,
)
from .textfmt import canonical_relabel


def _prune(a: WeightedAutomaton) -> WeightedAutomaton:
    keep = reachable_states(a.nfa)
    nfa = restrict(a.nfa, keep)
    return WeightedAutomaton(nfa, {t: a.wgt[t] for t in nfa.transitions})


def _backward_closure(cls, targets):
    rev = {}
    for (s, _a, d) in cls.nfa.transitions:
        rev.setdefault(d, set()).add(s)
    seen = set(targets)
    work = list(targets)
    while work:
        t = work.pop()
        for s in rev.get(t, ()):
            if s not in seen:
                seen.add(s)
                work.append(s)
    return seen


def build_step_transducer(phi, var, alphabet, vars=()) -> WeightedAutomaton:
    """Unambiguous transducer over the context alphabet whose run on a
    valid word outputs bit 1 at position i exactly when phi holds with
    var at i.  Invalid encodings get no accepting run.

    States carry (classifier state of the unmarked prefix, states that
    must end in F, states that must end in G, last emitted bit); the two
    outgoing guesses always differ in the last component, so transition
    weights are well defined."""
    vars = tuple(sorted(vars))
    if var in vars:
        raise InputError("position variable %s is shadowed" % var)
    inner_vars = tuple(sorted(vars + (var,)))
    if not free_vars(phi) <= set(inner_vars):
        raise InputError("free variables of the condition not in scope")
    cls = compile_fo(phi, alphabet, inner_vars)
    idx = inner_vars.index(var)
    letters = sorted(ext_alphabet(alphabet, vars), key=letter_key)

    def lift(a, bit):
        base_letter, bits = (a, ()) if not vars else a
        return (base_letter, bits[:idx] + (bit,) + bits[idx:])

    # Guessed states never leave their set, so a member that cannot reach
    # F (for X) or G (for Y) in the classifier kills every continuation;
    # dropping such targets prunes dead branches without losing any
    # accepting run.
    to_f = _backward_closure(cls, cls.f)
    to_g = _backward_closure(cls, cls.g)

    start = (cls.initial_state, frozenset(), frozenset(), 0)
    trans = set()
    wgt = {}
    seen = {start}
    queue = [start]
    while queue:
        state = queue.pop(0)
        (p, xs, ys, _) = state
        for a in letters:
            p2 = cls.step(p, lift(a, 0))
            xs0 = frozenset(cls.step(s, lift(a, 0)) for s in xs)
            ys0 = frozenset(cls.step(s, lift(a, 0)) for s in ys)
            mark = cls.step(p, lift(a, 1))
            for guess in (0, 1):
                if guess:
                    nxt = (p2, xs0 | {mark}, ys0, 1)
                else:
                    nxt = (p2, xs0, ys0 | {mark}, 0)
                if not (nxt[1] <= to_f and nxt[2] <= to_g):
                    continue
                trans.add((state, a, nxt))
                wgt[(state, a, nxt)] = guess
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    final = {s for s in seen
             if s[1] <= cls.f and s[2] <= cls.g and s != start}
    nfa = Nfa(seen, letters, trans, {start}, final)
    return WeightedAutomaton(nfa, wgt)


def _step_weight(psi, conds, bits):
    while isinstance(psi, StepIte):
        psi = psi.then if bits[conds.index(psi.cond)] else psi.els
    if not isinstance(psi, Const):
        raise InputError("not a step formula: %r" % (psi,))
    return psi.weight


def compile_product(step, var, alphabet, vars=()) -> WeightedAutomaton:
    """Automaton for the position product of a step formula: each
    position's transition is weighted by the cascade under the bit
    vector of the FO conditions at that position.

    The condition transducers are synchronized in bimachine form: a
    forward component walks the product of the condition classifiers
    over the unmarked word, a backward component carries the verdict
    each classifier state would reach on the remaining suffix, and the
    two meet at every position to decode its bit vector outright.  The
    suffix component is guessed up front and consumed co-
    deterministically, so every word keeps exactly one accepting run.
    (Guess-and-verify per position, as in the underlying proof, builds
    sets of pending verification threads; those power-set states made
    translations of modest automata unbuildable.)"""
    vars = tuple(sorted(vars))
    if var in vars:
        raise InputError("position variable %s is shadowed" % var)
    conds = fo_conditions(step)
    if not conds:
        step = StepIte(FoTrue(), step, step)
        conds = [FoTrue()]
    inner_vars = tuple(sorted(vars + (var,)))
    for c in conds:
        if not free_vars(c) <= set(inner_vars):
            raise InputError("free variables of the condition not in scope")
    clss = [compile_fo(c, alphabet, inner_vars) for c in conds]
    k = len(clss)
    idx = inner_vars.index(var)
    letters = sorted(ext_alphabet(alphabet, vars), key=letter_key)

    def lift(a, bit):
        base_letter, bits = (a, ()) if not vars else a
        return (base_letter, bits[:idx] + (bit,) + bits[idx:])

    lifted0 = [lift(a, 0) for a in letters]
    lifted1 = [lift(a, 1) for a in letters]

    # Forward component: deterministic joint walk of the unmarked word.
    d0 = tuple(c.initial_state for c in clss)
    prefix_next = {}
    orbit = {d0}
    work = [d0]
    while work:
        d = work.pop()
        for la in lifted0:
            d2 = tuple(clss[i].step(d[i], la) for i in range(k))
            prefix_next[(d, la)] = d2
            if d2 not in orbit:
                orbit.add(d2)
                work.append(d2)

    # Backward component: per classifier, the verdict (2 accept, 1
    # refute, 0 invalid) every state would reach on the rest of the
    # word; classifier states are 1..n, so a verdict table is a tuple.
    def verdict_table(c):
        return tuple(2 if s in c.f else 1 if s in c.g else 0
                     for s in range(1, len(c.nfa.states) + 1))

    f_end = tuple(verdict_table(c) for c in clss)

    def compose(f, la):
        return tuple(tuple(f[i][clss[i].step(s, la) - 1]
                           for s in range(1, len(f[i]) + 1))
                     for i in range(k))

    suffixes = {f_end}
    compose_to = {}
    work = [f_end]
    while work:
        f = work.pop()
        for la in lifted0:
            f2 = compose(f, la)
            compose_to[(f, la)] = f2
            if f2 not in suffixes:
                suffixes.add(f2)
                work.append(f2)

    # A transition consumes one position: the forward state advances,
    # the suffix table unwinds by one composition, and the verdicts of
    # the mark-here successors decode the position's bit vector.  A
    # fresh-start flag keeps the empty word out of the support.
    trans = set()
    wgt = {}
    states = set()
    for f in suffixes:
        for la0, la1, a in zip(lifted0, lifted1, letters):
            f_src = compose_to[(f, la0)]
            for d in orbit:
                verdicts = tuple(f[i][clss[i].step(d[i], la1) - 1]
                                 for i in range(k))
                if 0 in verdicts:
                    continue
                bits = tuple(v == 2 for v in verdicts)
                d2 = prefix_next[(d, la0)]
                w = _step_weight(step, conds, bits)
                dst = (d2, f, 1)
                for started in (0, 1) if d == d0 else (1,):
                    src = (d, f_src, started)
                    states.add(src)
                    states.add(dst)
                    trans.add((src, a, dst))
                    wgt[(src, a, dst)] = w
    initial = {(d0, f, 0) for f in suffixes}
    states |= initial
    final = {s for s in states if s[1] == f_end and s[2] == 1}
    keep = reachable_states(Nfa(states, letters, trans, initial, final))
    nfa = restrict(Nfa(states, letters, trans, initial, final), keep)
    return WeightedAutomaton(nfa, {t: wgt[t] for t in nfa.transitions})


def compile_ite(cond, then_wa: WeightedAutomaton, else_wa: WeightedAutomaton,
                alphabet, vars=()) -> WeightedAutomaton:
    """Weighted if-then-else: product of the condition's classifier with
    the disjoint union of the branches; a final pair needs F with the
    then-branch and G with the else-branch, so invalid encodings and the
    wrong branch die together."""
    vars = tuple(sorted(vars))
    cls = compile_fo(cond, alphabet, vars)
    letters = sorted(ext_alphabet(alphabet, vars), key=letter_key)
    if frozenset(then_wa.nfa.alphabet) != frozenset(letters) \
            or frozenset(else_wa.nfa.alphabet) != frozenset(letters):
        raise InputError("branch alphabet mismatch")
    trans = set()
    wgt = {}
    seen = set()
    queue = []
    for tag, branch in ((0, then_wa), (1, else_wa)):
        for q0 in branch.nfa.initial:
            s = (tag, cls.initial_state, q0)
            if s not in seen:
                seen.add(s)
                queue.append(s)
    branches = (then_wa, else_wa)
    while queue:
        state = queue.pop(0)
        (tag, c, q) = state
        branch = branches[tag]
        for a in letters:
            c2 = cls.step(c, a)
            for q2 in branch.nfa.out(q, a):
                nxt = (tag, c2, q2)
                t = (state, a, nxt)
                trans.add(t)
                wgt[t] = branch.wgt[(q, a, q2)]
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
    final = {(tag, c, q) for (tag, c, q) in seen
             if (c in cls.f and tag == 0 and q in then_wa.nfa.final)
             or (c in cls.g and tag == 1 and q in else_wa.nfa.final)}
    nfa = Nfa(seen, letters, trans, {(0, cls.initial_state, q0)
                                     for q0 in then_wa.nfa.initial}
              | {(1, cls.initial_state, q0) for q0 in else_wa.nfa.initial},
              final)
    return WeightedAutomaton(nfa, wgt)


def compile_plus(a: WeightedAutomaton, b: WeightedAutomaton):
    return weighted_union(a, b)


def compile_sum_var(a: WeightedAutomaton, var, alphabet,
                    vars) -> WeightedAutomaton:
    """Sum over a variable: erase its mark row and keep two copies of the
    automaton; the bit flips 0 to 1 exactly on the transition that read
    the mark, so accepted runs correspond to (position, original run)."""
    vars = tuple(sorted(vars))
    if var not in vars:
        raise InputError("sum variable %s not present" % var)
    out_vars = tuple(v for v in vars if v != var)
    idx = vars.index(var)

    def strip(l):
        base_letter, bits = l
        rest = bits[:idx] + bits[idx + 1:]
        return (base_letter, rest) if out_vars else base_letter

    trans = set()
    wgt = {}
    for t in sorted(a.nfa.transitions, key=lambda t: letter_key(t)):
        (p, l, q) = t
        w = a.wgt[t]
        out_l = strip(l)
        if l[1][idx]:
            tt = ((p, 0), out_l, (q, 1))
            trans.add(tt)
            wgt[tt] = w
        else:
            for c in (0, 1):
                tt = ((p, c), out_l, (q, c))
                trans.add(tt)
                wgt[tt] = w
    states = {(q, c) for q in a.nfa.states for c in (0, 1)}
    nfa = Nfa(states, ext_alphabet(alphabet, out_vars), trans,
              {(q, 0) for q in a.nfa.initial},
              {(q, 1) for q in a.nfa.final})
    return _prune(WeightedAutomaton(nfa, wgt))


def compile_wfo(phi, alphabet, vars=()) -> WeightedAutomaton:
    """Weighted automaton over the (marked) alphabet equivalent to phi.
    With the default empty variable context, phi must be a sentence."""
    vars = tuple(sorted(set(vars)))
    missing = free_vars(phi) - set(vars)
    if missing:
        raise InputError("free variables not in scope: %s"
                         % ", ".join(sorted(missing)))
    base = frozenset(alphabet)
    if not base:
        raise InputError("alphabet must not be empty")
    return canonical_relabel(_prune(_go(phi, base, vars)))


def _go(phi, base, vars) -> WeightedAutomaton:
    if isinstance(phi, Zero):
        letters = ext_alphabet(base, vars)
        return WeightedAutomaton(
            Nfa({0}, letters, set(), {0}, set()), {})
    if isinstance(phi, ProdX):
        if phi.var in vars:
            raise InputError("variable %s is shadowed" % phi.var)
        return compile_product(phi.step, phi.var, base, vars)
    if isinstance(phi, WIte):
        return compile_ite(phi.cond, _go(phi.then, base, vars),
                           _go(phi.els, base, vars), base, vars)
    if isinstance(phi, Plus):
        return weighted_union(_go(phi.left, base, vars),
                              _go(phi.right, base, vars))
    if isinstance(phi, SumX):
        if phi.var in vars:
            raise InputError("variable %s is shadowed" % phi.var)
        inner_vars = tuple(sorted(vars + (phi.var,)))
        inner = _go(phi.body, base, inner_vars)
        return compile_sum_var(inner, phi.var, base, inner_vars)
    raise InputError("not a weighted formula: %r" % (phi,))


def rewrite_sum_normal_form(phi):
    """Rewrite a variable-sum-free formula into a sum of terms, each of
    them Zero, a position product, or a guarded formula with else Zero
    whose then-branch is free of + (still no variable sums anywhere)."""
    if uses_sumx(phi):
        raise InputError("variable sums cannot be normalized away")
    terms = _terms(phi)
    if not terms:
        return Zero()
    out = terms[0]
    for t in terms[1:]:
        out = Plus(out, t)
    return out


def _terms(phi):
    if isinstance(phi, Zero):
        return []
    if isinstance(phi, ProdX):
        return [phi]
    if isinstance(phi, Plus):
        return _terms(phi.left) + _terms(phi.right)
    if isinstance(phi, WIte):
        pos = [WIte(phi.cond, t, Zero()) for t in _terms(phi.then)]
        neg = [WIte(Not(phi.cond), t, Zero()) for t in _terms(phi.els)]
        return pos + neg
    raise InputError("not a weighted formula: %r" % (phi,))
