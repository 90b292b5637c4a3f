"""Command line front end: evaluation, compilation in both directions,
decomposition, classification, and desk-scale equivalence checking.

Exit codes: 0 on success, 1 when a verification or hypothesis check fails
(equiv counterexample, refused translation, refused decomposition), 2 on
bad input.  Output is deterministic for fixed inputs.
"""

import argparse
import dataclasses
import os
import sys

from .automata import (
    WeightedAutomaton, abstract_semantics, aperiodicity_index,
    classify_ambiguity, is_unambiguous, words_upto,
    EXPONENTIALLY, FINITELY, POLYNOMIALLY, UNAMBIGUOUS,
)
from .decompose import build_a_geq_k, decompose, ensure_single_initial
from .errors import HypothesisError, InputError, VerificationFailure
from .fo_compiler import compile_fo
from .logic.syntax import (
    FoFormula, LetterAt, RunAtom, StepFormula, SumX, WfoFormula, format_wfo,
    free_vars,
)
from .logic.parser import parse_formula_file, serialize_formula_file
from .semantics import (
    builtin_semiring, max_average_aggregator, sum_product_aggregator,
)
from .textfmt import parse_automaton, parse_letter, serialize_automaton, to_dot
from .wa_to_wfo import scc_unambiguous_to_wfo, unambiguous_wa_to_wfo
from .wfo_compiler import compile_wfo

SEMIRING_FLAGS = ("natural", "boolean", "minplus", "maxplus", "languages",
                  "multiset")


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as err:
        raise InputError("cannot read %s: %s" % (path, err))


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    except OSError as err:
        raise InputError("cannot write %s: %s" % (out, err))


def _load_automaton(path):
    return parse_automaton(_read(path))


def _load_weighted(path) -> WeightedAutomaton:
    a = _load_automaton(path)
    if not isinstance(a, WeightedAutomaton):
        raise InputError("%s has no transition weights" % path)
    return a


def _word_of(args):
    if getattr(args, "word_tokens", None) is not None:
        return tuple(parse_letter(t) for t in args.word_tokens.split())
    if getattr(args, "word", None) is not None:
        return tuple(args.word)
    raise InputError("need --word or --word-tokens")


def _split_names(text):
    return [t for t in text.replace(",", " ").split() if t]


def _letters_in(node, out):
    if isinstance(node, LetterAt):
        out.add(node.letter)
    elif isinstance(node, RunAtom):
        out.update(node.nfa.alphabet)
    if dataclasses.is_dataclass(node):
        for field in dataclasses.fields(node):
            value = getattr(node, field.name)
            if isinstance(value, (FoFormula, StepFormula, WfoFormula)):
                _letters_in(value, out)


def _alphabet_for(formula, override):
    if override:
        return frozenset(parse_letter(t) for t in _split_names(override))
    letters = set()
    _letters_in(formula, letters)
    if not letters:
        raise InputError("cannot infer an alphabet; pass --alphabet")
    return frozenset(letters)


def _render(a, fmt):
    return to_dot(a) if fmt == "dot" else serialize_automaton(a)


def _maxlen(args):
    if args.maxlen is not None:
        return args.maxlen
    return int(os.environ.get("WFOC_MAXLEN", "8"))


# -- commands -----------------------------------------------------------------


def _cmd_eval(args):
    wa = _load_weighted(args.automaton)
    sem = abstract_semantics(wa, _word_of(args))
    if args.aggregator == "ma":
        if args.semiring:
            raise InputError("max-average takes no semiring")
        agg = max_average_aggregator()
    elif args.semiring:
        name = "multiset_seqs" if args.semiring == "multiset" else args.semiring
        agg = sum_product_aggregator(builtin_semiring(name))
    elif args.aggregator == "sp":
        raise InputError("sum-product needs --semiring")
    else:
        print(sem.pretty())
        return 0
    print(agg.fmt(agg(sem)))
    return 0


def _stage_lines(phi, alphabet, vars, lines):
    for child in (getattr(phi, "then", None), getattr(phi, "els", None),
                  getattr(phi, "left", None), getattr(phi, "right", None)):
        if isinstance(child, WfoFormula):
            _stage_lines(child, alphabet, vars, lines)
    if isinstance(phi, SumX):
        _stage_lines(phi.body, alphabet, vars + (phi.var,), lines)
    wa = compile_wfo(phi, alphabet, vars)
    idx = aperiodicity_index(wa)
    note = ""
    if isinstance(phi, SumX):
        inner = compile_wfo(phi.body, alphabet, vars + (phi.var,))
        inner_idx = aperiodicity_index(inner)
        if inner_idx is not None:
            note = " (projection bound %d)" % (2 * inner_idx)
    lines.append("%s :: states=%d ambiguity=%s index=%s%s"
                 % (format_wfo(phi), len(wa.nfa.states),
                    _CLASS_WORDS[classify_ambiguity(wa)], idx, note))
    return wa


def _cmd_compile(args):
    parsed = parse_formula_file(_read(args.formula), "wfo")
    alphabet = _alphabet_for(parsed.formula, args.alphabet)
    if args.report:
        lines = []
        wa = _stage_lines(parsed.formula, alphabet, (), lines)
        for line in lines:
            print(line)
    else:
        wa = compile_wfo(parsed.formula, alphabet)
    _emit(_render(wa, args.format), args.out)
    return 0


def _cmd_compile_fo(args):
    parsed = parse_formula_file(_read(args.formula), "fo")
    alphabet = _alphabet_for(parsed.formula, args.alphabet)
    vars = tuple(_split_names(args.vars)) if args.vars \
        else tuple(sorted(free_vars(parsed.formula)))
    cls = compile_fo(parsed.formula, alphabet, vars)
    _emit(_render(cls.nfa, args.format), args.out)
    return 0


def _cmd_tologic(args):
    wa = _load_weighted(args.automaton)
    if args.mode == "unambiguous":
        phi = unambiguous_wa_to_wfo(wa)
    elif args.mode == "scc":
        phi = scc_unambiguous_to_wfo(wa)
    elif is_unambiguous(wa):
        phi = unambiguous_wa_to_wfo(wa)
    else:
        phi = scc_unambiguous_to_wfo(wa)
    _emit(serialize_formula_file(phi, "wfo"), args.out)
    return 0


def _cmd_decompose(args):
    wa = _load_weighted(args.automaton)
    parts = decompose(wa, args.bound)
    k = len(parts)
    norm = ensure_single_initial(wa)
    m = aperiodicity_index(norm)
    print("input: states=%d index=%s bound K=%d%s"
          % (len(wa.nfa.states), m, k,
             "" if args.bound is not None else " (detected)"))
    if norm is not wa:
        print("note: added a fresh initial state (input had %d)"
              % len(wa.nfa.initial))
    for stage in range(1, k + 1):
        geq = build_a_geq_k(norm.nfa, stage)
        bound = "" if m is None else " bound=%d" % (stage * (m + 1))
        print("A_>=%d: states=%d index=%s%s"
              % (stage, len(geq.states), aperiodicity_index(geq), bound))
    suffix = "dot" if args.format == "dot" else "wa"
    for ell, part in enumerate(parts, start=1):
        path = "%s.%d.%s" % (args.out, ell, suffix)
        _emit(_render(part, args.format), path)
        print("B_%d: states=%d unambiguous=%s index=%s -> %s"
              % (ell, len(part.nfa.states),
                 "yes" if is_unambiguous(part) else "no",
                 aperiodicity_index(part), path))
    return 0


_CLASS_WORDS = {
    UNAMBIGUOUS: "unambiguous",
    FINITELY: "finite",
    POLYNOMIALLY: "polynomial (SCC-unambiguous)",
    EXPONENTIALLY: "exponential",
}


def _cmd_classify(args):
    a = _load_automaton(args.automaton)
    kind = _CLASS_WORDS[classify_ambiguity(a)]
    idx = aperiodicity_index(a)
    aper = "no" if idx is None else "yes, index=%d" % idx
    print("ambiguity: %s; aperiodic: %s" % (kind, aper))
    return 0


def _sem_or_empty(wa, word):
    if any(letter not in wa.nfa.alphabet for letter in word):
        return None
    return abstract_semantics(wa, word)


def _cmd_equiv(args):
    first = _load_weighted(args.a)
    second = _load_weighted(args.b)
    maxlen = _maxlen(args)
    alphabet = first.nfa.alphabet | second.nfa.alphabet
    for word in words_upto(alphabet, maxlen):
        got = _sem_or_empty(first, word)
        want = _sem_or_empty(second, word)
        if got == want or (not got or got.total() == 0) and \
                (not want or want.total() == 0):
            continue
        print("COUNTEREXAMPLE %s" % "".join(str(l) for l in word))
        for tag, sem in (("a", got), ("b", want)):
            body = sem.pretty() if sem is not None and sem.total() else "(empty)"
            print("%s:" % tag)
            print(body)
        return 1
    print("EQUIV up to %d" % maxlen)
    return 0


def _cmd_dot(args):
    _emit(to_dot(_load_automaton(args.automaton)), args.out)
    return 0


# -- argument plumbing ---------------------------------------------------------


def _add_format(sub):
    sub.add_argument("--format", choices=("text", "dot"), default="text")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="wfoc",
        description="weighted automata and weighted first-order logic")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("eval", help="evaluate an automaton on a word")
    sub.add_argument("--automaton", required=True)
    sub.add_argument("--word")
    sub.add_argument("--word-tokens", dest="word_tokens")
    sub.add_argument("--semiring", choices=SEMIRING_FLAGS)
    sub.add_argument("--aggregator", choices=("sp", "ma"))
    sub.set_defaults(fn=_cmd_eval)

    sub = subs.add_parser("compile", help="compile a weighted sentence")
    sub.add_argument("--formula", required=True)
    sub.add_argument("-o", "--out")
    sub.add_argument("--alphabet")
    sub.add_argument("--report", action="store_true")
    _add_format(sub)
    sub.set_defaults(fn=_cmd_compile)

    sub = subs.add_parser("compile-fo", help="compile a boolean formula")
    sub.add_argument("--formula", required=True)
    sub.add_argument("--vars")
    sub.add_argument("-o", "--out")
    sub.add_argument("--alphabet")
    _add_format(sub)
    sub.set_defaults(fn=_cmd_compile_fo)

    sub = subs.add_parser("tologic", help="translate an automaton to logic")
    sub.add_argument("--automaton", required=True)
    sub.add_argument("-o", "--out")
    sub.add_argument("--mode", choices=("auto", "unambiguous", "scc"),
                     default="auto")
    sub.set_defaults(fn=_cmd_tologic)

    sub = subs.add_parser("decompose",
                          help="split into unambiguous automata")
    sub.add_argument("--automaton", required=True)
    sub.add_argument("-K", dest="bound", type=int)
    sub.add_argument("-o", "--out", required=True)
    _add_format(sub)
    sub.set_defaults(fn=_cmd_decompose)

    sub = subs.add_parser("classify", help="ambiguity and aperiodicity")
    sub.add_argument("--automaton", required=True)
    sub.set_defaults(fn=_cmd_classify)

    sub = subs.add_parser("equiv", help="compare two automata on all short words")
    sub.add_argument("--a", required=True)
    sub.add_argument("--b", required=True)
    sub.add_argument("--maxlen", type=int)
    sub.set_defaults(fn=_cmd_equiv)

    sub = subs.add_parser("dot", help="DOT export")
    sub.add_argument("--automaton", required=True)
    sub.add_argument("-o", "--out")
    sub.set_defaults(fn=_cmd_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (HypothesisError, VerificationFailure) as err:
        print("refused: %s" % err, file=sys.stderr)
        return 1
    except InputError as err:
        print("error: %s" % err, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
