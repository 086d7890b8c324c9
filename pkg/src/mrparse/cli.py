"""Command line interface.

Exit codes: 0 success, 1 bad input data, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from . import evaluate as ev
from .encoding import (
    assign_heads,
    collapse_unary_chains,
    decode,
    encode,
    is_continuous,
)
from .errors import DataError
from .headrules import load_head_rules
from .transition import oracle, write_pointers
from .trees import (
    BRACKETED,
    DISCBRACKET,
    Token,
    detect_format,
    parse_augmented,
    parse_constituent,
    parse_dependency,
    serialize_augmented,
    serialize_dependency,
    write_constituents,
)

DEFAULT_SEED = 1
PARSE_BATCH = 32

logger = logging.getLogger("mrparse")


def _read(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as f:
        return f.read()


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)


def _format_flag(args):
    if args.bracketed:
        return BRACKETED
    if args.discbracket:
        return DISCBRACKET
    return None


def _read_constituents(path, fmt):
    text = _read(path)
    return parse_constituent(text, fmt or detect_format(text))


def _output_format(trees, fmt):
    if fmt:
        return fmt
    return BRACKETED if all(is_continuous(t) for t in trees) else DISCBRACKET


def _threads(args):
    if getattr(args, "threads", None):
        return args.threads
    return int(os.environ.get("MRP_THREADS", "1"))


def _add_format_flags(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--bracketed", action="store_true", help="constituent trees are PTB bracketed")
    g.add_argument("--discbracket", action="store_true",
                   help="constituent trees are discbracket (terminals index=form, 0-based)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="mrparse",
        description="Joint constituent/dependency parsing with a multitask pointer network.")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="constituent trees <-> augmented dependency trees")
    p.add_argument("input", help="input file ('-' for stdin)")
    p.add_argument("output", nargs="?", default="-", help="output file (default stdout)")
    p.add_argument("--head-rules", metavar="FILE", help="head-rule file (required unless --reverse)")
    p.add_argument("--collapse-unaries", action="store_true",
                   help="collapse unary chains and keep leaf unaries in the FEATS column")
    p.add_argument("--reverse", action="store_true",
                   help="decode augmented CoNLL back into constituent trees")
    _add_format_flags(p)

    p = sub.add_parser("oracle", help="dump gold SHIFT-ATTACH-p pointer sequences")
    p.add_argument("input", help="CoNLL-X file ('-' for stdin)")
    p.add_argument("output", nargs="?", default="-", help="output file (default stdout)")

    p = sub.add_parser("train", help="train a model on parallel treebanks")
    p.add_argument("--const", required=True, metavar="FILE", help="training constituent trees")
    p.add_argument("--dep", required=True, metavar="FILE", help="training CoNLL-X trees")
    p.add_argument("--dev-const", metavar="FILE", help="development constituent trees")
    p.add_argument("--dev-dep", metavar="FILE", help="development CoNLL-X trees")
    p.add_argument("--head-rules", required=True, metavar="FILE", help="head-rule file")
    p.add_argument("--config", metavar="FILE", help="key = value hyper-parameter file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override one hyper-parameter (repeatable; wins over --config)")
    p.add_argument("--out", required=True, metavar="MODEL", help="checkpoint to write")
    p.add_argument("--external", metavar="FILE", help="precomputed per-token vectors (train)")
    p.add_argument("--dev-external", metavar="FILE", help="precomputed per-token vectors (dev)")
    p.add_argument("--epochs", type=int, help="maximum number of epochs")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"default {DEFAULT_SEED}")
    p.add_argument("--tasks", help="comma-separated subset of dep,const (single-task baselines)")
    proj = p.add_mutually_exclusive_group()
    proj.add_argument("--projective", action="store_true",
                      help="force the projectivity constraint in both decoders")
    proj.add_argument("--non-projective", action="store_true",
                      help="disable it (default: on for a decoder iff all its training trees are projective)")
    p.add_argument("--single-root", action="store_true", help="allow one dependent of ROOT per tree")
    p.add_argument("--no-unaries", action="store_true", help="do not model leaf unary chains")
    p.add_argument("--threads", type=int, help="torch threads (default $MRP_THREADS or 1)")
    _add_format_flags(p)

    p = sub.add_parser("parse", help="parse sentences with a trained model")
    p.add_argument("--model", required=True, help="checkpoint written by train")
    p.add_argument("--input", required=True,
                   help="CoNLL-X file (FORM and POSTAG are used) or, with --text, one sentence per line")
    p.add_argument("--text", action="store_true", help="input is whitespace-tokenized text")
    p.add_argument("--emit", choices=("conll", "bracketed", "discbracket", "both"), default="both",
                   help="what to write (default both: CoNLL-X plus constituent trees)")
    p.add_argument("--output", metavar="PATH",
                   help="output file; with --emit both, PATH.conll and PATH.trees")
    p.add_argument("--external", metavar="FILE", help="precomputed per-token vectors")
    p.add_argument("--threads", type=int, help="worker threads (default $MRP_THREADS or 1)")

    p = sub.add_parser("eval", help="score predictions against gold trees")
    p.add_argument("--gold", required=True, help="gold trees")
    p.add_argument("--pred", required=True, help="predicted trees")
    p.add_argument("--metric", choices=("dep", "const", "disco"), required=True,
                   help="dep: UAS/LAS on CoNLL-X; const: bracketing F1; disco: F1 and discontinuous F1")
    punct = p.add_mutually_exclusive_group()
    punct.add_argument("--include-punct", action="store_true", help="score every token (default)")
    punct.add_argument("--punct-pos", metavar="TAGS",
                       help="comma-separated POS tags treated as punctuation and not scored")
    punct.add_argument("--ptb-punct", action="store_true",
                       help="exclude the PTB punctuation tags `` '' : , .")
    p.add_argument("--ignore-root", action="store_true", help="do not score the root constituent")
    _add_format_flags(p)
    return ap


# ---------------------------------------------------------------------------

def cmd_convert(args):
    fmt = _format_flag(args)
    if args.reverse:
        trees = [decode(a) for a in parse_augmented(_read(args.input))]
        _write(args.output, write_constituents(trees, _output_format(trees, fmt)))
        return 0
    if not args.head_rules:
        raise UsageError("convert needs --head-rules (or --reverse)")
    rules = load_head_rules(args.head_rules)
    out = []
    for tree in _read_constituents(args.input, fmt):
        headed = assign_heads(tree, rules)
        if args.collapse_unaries:
            headed, leaf = collapse_unary_chains(headed)
            out.append(encode(headed, leaf))
        else:
            out.append(encode(headed))
    _write(args.output, serialize_augmented(out))
    return 0


def cmd_oracle(args):
    trees = parse_dependency(_read(args.input))
    _write(args.output, write_pointers(oracle(t) for t in trees))
    return 0


def _parallel(const_path, dep_path, rules, fmt, external_path):
    from .encoding import tree_to_augmented
    from .model import load_external_embeddings, make_parallel

    consts = _read_constituents(const_path, fmt)
    deps = parse_dependency(_read(dep_path))
    externals = None
    if external_path:
        externals = load_external_embeddings(external_path, [d.tokens for d in deps])
    return make_parallel(deps, [tree_to_augmented(t, rules) for t in consts], externals)


def cmd_train(args):
    import torch

    from .model import ModelConfig, TrainConfig, save, train
    from .model.config import apply_settings, parse_config
    from .model.train import default_projectivity

    torch.set_num_threads(_threads(args))
    mc, tc = ModelConfig(), TrainConfig()
    if args.config:
        apply_settings(parse_config(_read(args.config)), mc, tc)
    overrides = {}
    for item in args.set:
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--set expects KEY=VALUE, got {item!r}")
        overrides[key] = value
    if args.epochs is not None:
        overrides["epochs"] = str(args.epochs)
    overrides["seed"] = str(args.seed)
    if args.tasks:
        overrides["tasks"] = args.tasks
    apply_settings(overrides, mc, tc)

    rules = load_head_rules(args.head_rules)
    fmt = _format_flag(args)
    corpus = _parallel(args.const, args.dep, rules, fmt, args.external)
    dev = None
    if args.dev_const or args.dev_dep:
        if not (args.dev_const and args.dev_dep):
            raise UsageError("--dev-const and --dev-dep go together")
        dev = _parallel(args.dev_const, args.dev_dep, rules, fmt, args.dev_external)
    if corpus and corpus[0].external is not None:
        mc.external_dim = corpus[0].external.shape[1]
    default_projectivity(mc, corpus)
    if args.projective:
        mc.projective_dep = mc.projective_const = True
    elif args.non_projective:
        mc.projective_dep = mc.projective_const = False
    mc.single_root = args.single_root
    if args.no_unaries:
        mc.leaf_unaries = False
    result = train(corpus, dev, mc, tc)
    save(result.parser, args.out)
    print(f"best_epoch={result.best_epoch} dev_score={result.best_score:.2f}")
    return 0


def _read_sentences(args):
    text = _read(args.input)
    if args.text:
        return [tuple(Token(i, w) for i, w in enumerate(line.split(), 1))
                for line in text.splitlines() if line.strip()]
    return [d.tokens for d in parse_dependency(text)]


def cmd_parse(args):
    import torch

    from .model import load, load_external_embeddings

    parser = load(args.model)
    sentences = _read_sentences(args)
    externals = None
    if args.external:
        externals = load_external_embeddings(args.external, sentences)
    threads = _threads(args)
    torch.set_num_threads(1 if threads > 1 else torch.get_num_threads())
    chunks = [(sentences[i: i + PARSE_BATCH],
               None if externals is None else externals[i: i + PARSE_BATCH])
              for i in range(0, len(sentences), PARSE_BATCH)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = [r for chunk in pool.map(lambda c: parser.predict_batch(*c), chunks)
                   for r in chunk]
    deps = [d for d, _ in results]
    trees = [t for _, t in results]
    conll = serialize_dependency(deps)
    if args.emit == "conll":
        _write(args.output, conll)
    elif args.emit in (BRACKETED, DISCBRACKET):
        _write(args.output, write_constituents(trees, args.emit))
    else:
        const = write_constituents(trees, _output_format(trees, None))
        if args.output:
            _write(args.output + ".conll", conll)
            _write(args.output + ".trees", const)
        else:
            _write(None, conll + const)
    return 0


def cmd_eval(args):
    if args.punct_pos:
        tags = frozenset(t for t in args.punct_pos.split(",") if t)
        config = ev.EvalConfig(ev.EXCLUDE_BY_POS, tags, args.ignore_root)
    elif args.ptb_punct:
        config = ev.EvalConfig(ev.EXCLUDE_BY_POS, ev.PTB_PUNCT, args.ignore_root)
    else:
        config = ev.EvalConfig(ev.INCLUDE_ALL, frozenset(), args.ignore_root)
    if args.metric == "dep":
        gold = parse_dependency(_read(args.gold))
        pred = parse_dependency(_read(args.pred))
        total, _, _ = ev.attachment_counts(gold, pred, config)
        uas, las = ev.attachment_scores(gold, pred, config)
        print(f"sentences: {len(gold)}  scored tokens: {total}")
        print(ev.summary(uas=uas, las=las))
        return 0
    fmt = _format_flag(args)
    gold = _read_constituents(args.gold, fmt)
    pred = _read_constituents(args.pred, fmt)
    p, r, f = ev.constituency_f1(gold, pred, config)
    print(f"sentences: {len(gold)}")
    if args.metric == "const":
        print(ev.summary(p=p, r=r, f1=f))
    else:
        dp, dr, df = ev.discontinuous_prf(gold, pred, config)
        print(ev.summary(f1=f, dp=dp, dr=dr, df1=df))
    return 0


class UsageError(Exception):
    pass


COMMANDS = {
    "convert": cmd_convert,
    "oracle": cmd_oracle,
    "train": cmd_train,
    "parse": cmd_parse,
    "eval": cmd_eval,
}


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as err:
        ap.print_usage(sys.stderr)
        print(f"mrparse {args.command}: error: {err}", file=sys.stderr)
        return 2
    except (DataError, OSError, FloatingPointError) as err:
        print(f"mrparse {args.command}: {err}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
