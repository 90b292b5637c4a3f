"""Direct, brute-force semantics for all three formula layers.

This is the oracle: every compiler in the package is tested against these
functions on exhaustive small-word sweeps.
"""

from __future__ import annotations

from ..errors import InputError
from ..multiset import SeqMultiset
from .encoding import ExtWord, decode, encode
from .syntax import (
    And, Const, EqVar, Exists, Forall, FoTrue, Implies, Leq, LetterAt, Lt,
    Not, Or, Plus, ProdX, RunAtom, StepIte, SumX, WIte, Zero,
    free_vars,
)


def nfa_run_accepts(nfa, p, q, word) -> bool:
    """Is there a run of `nfa` from p to q labeled by `word`?  The empty
    word is accepted exactly when p == q."""
    word = tuple(word)
    if p not in nfa.states or q not in nfa.states:
        raise InputError("unknown state in run atom: %r, %r" % (p, q))
    current = {p}
    for a in word:
        current = {d for s in current for d in nfa.out(s, a)}
        if not current:
            return False
    return q in current


def _factor(u, sigma, atom: RunAtom):
    lo = sigma[atom.lo] if atom.lo is not None else 0
    hi = sigma[atom.hi] if atom.hi is not None else len(u) + 1
    if lo >= hi:
        return ()
    return u[lo:hi - 1]


def eval_fo(phi, u, sigma=None) -> bool:
    u = tuple(u)
    sigma = dict(sigma) if sigma else {}
    missing = free_vars(phi) - set(sigma)
    if missing:
        if not u:
            raise InputError("empty word needs a sentence, free: %s"
                             % ", ".join(sorted(missing)))
        raise InputError("unbound variables: %s"
                         % ", ".join(sorted(missing)))
    return _fo(phi, u, sigma)


def _fo(phi, u, sigma) -> bool:
    if isinstance(phi, FoTrue):
        return True
    if isinstance(phi, LetterAt):
        return u[sigma[phi.var] - 1] == phi.letter
    if isinstance(phi, Leq):
        return sigma[phi.left] <= sigma[phi.right]
    if isinstance(phi, Lt):
        return sigma[phi.left] < sigma[phi.right]
    if isinstance(phi, EqVar):
        return sigma[phi.left] == sigma[phi.right]
    if isinstance(phi, Not):
        return not _fo(phi.sub, u, sigma)
    if isinstance(phi, And):
        return _fo(phi.left, u, sigma) and _fo(phi.right, u, sigma)
    if isinstance(phi, Or):
        return _fo(phi.left, u, sigma) or _fo(phi.right, u, sigma)
    if isinstance(phi, Implies):
        return (not _fo(phi.left, u, sigma)) or _fo(phi.right, u, sigma)
    if isinstance(phi, Forall):
        if phi.var in sigma:
            raise InputError("shadowed variable %s" % phi.var)
        return all(_fo(phi.body, u, {**sigma, phi.var: i})
                   for i in range(1, len(u) + 1))
    if isinstance(phi, Exists):
        if phi.var in sigma:
            raise InputError("shadowed variable %s" % phi.var)
        return any(_fo(phi.body, u, {**sigma, phi.var: i})
                   for i in range(1, len(u) + 1))
    if isinstance(phi, RunAtom):
        return nfa_run_accepts(phi.nfa, phi.p, phi.q, _factor(u, sigma, phi))
    raise TypeError("not an FO formula: %r" % (phi,))


def eval_step(psi, u, sigma=None):
    u = tuple(u)
    if not u:
        raise InputError("step formulas need a non-empty word")
    sigma = dict(sigma) if sigma else {}
    missing = free_vars(psi) - set(sigma)
    if missing:
        raise InputError("unbound variables: %s"
                         % ", ".join(sorted(missing)))
    return _step(psi, u, sigma)


def _step(psi, u, sigma):
    while isinstance(psi, StepIte):
        psi = psi.then if _fo(psi.cond, u, sigma) else psi.els
    if isinstance(psi, Const):
        return psi.weight
    raise TypeError("not a step formula: %r" % (psi,))


def eval_wfo(phi, ext: ExtWord) -> SeqMultiset:
    if len(ext) == 0:
        raise InputError("weighted formulas are defined on non-empty words")
    extra = free_vars(phi) - set(ext.vars)
    if extra:
        raise InputError("free variables %s not carried by the word"
                         % ", ".join(sorted(extra)))
    decoded = decode(ext)
    if decoded is None:
        return SeqMultiset()
    u, sigma = decoded
    return _wfo(phi, u, sigma)


def eval_wfo_at(phi, word, valuation=None, vars=None) -> SeqMultiset:
    valuation = dict(valuation) if valuation else {}
    if vars is None:
        vars = set(valuation) | set(free_vars(phi))
    return eval_wfo(phi, encode(word, valuation, vars))


def _wfo(phi, u, sigma) -> SeqMultiset:
    if isinstance(phi, Zero):
        return SeqMultiset()
    if isinstance(phi, ProdX):
        if phi.var in sigma:
            raise InputError("shadowed variable %s" % phi.var)
        seq = tuple(_step(phi.step, u, {**sigma, phi.var: i})
                    for i in range(1, len(u) + 1))
        return SeqMultiset({seq: 1})
    if isinstance(phi, WIte):
        branch = phi.then if _fo(phi.cond, u, sigma) else phi.els
        return _wfo(branch, u, sigma)
    if isinstance(phi, Plus):
        return _wfo(phi.left, u, sigma).union(_wfo(phi.right, u, sigma))
    if isinstance(phi, SumX):
        if phi.var in sigma:
            raise InputError("shadowed variable %s" % phi.var)
        parts = [_wfo(phi.body, u, {**sigma, phi.var: i})
                 for i in range(1, len(u) + 1)]
        return SeqMultiset().union(*parts)
    raise TypeError("not a weighted formula: %r" % (phi,))
