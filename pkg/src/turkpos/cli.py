"""Command-line entry points for every pipeline stage.

Each subcommand is a thin shell over one library operation. Exit codes:
0 success, 1 domain error (one-line diagnostic on stderr), 2 usage error.
"""

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .corpus import read_corpus, write_corpus
from .errors import TaggerError
from .hmm import bootstrap_label, dump_hmm, train_hmm
from .model import gradcheck_fixture, gradient_check
from .model_io import load_model, save_model
from .preprocess import preprocess_document
from .tagger import export_analysis, tag_text
from .trainer import TrainConfig, evaluate, train

GRADCHECK_TOLERANCE = 1e-5


def _cmd_preprocess(args) -> int:
    text = Path(args.input).read_text(encoding="utf-8")
    sentences = preprocess_document(text)
    out = "\n".join(" ".join(tokens) for tokens in sentences)
    Path(args.out).write_text(out + ("\n" if out else ""), encoding="utf-8")
    print(f"wrote {len(sentences)} sentences to {args.out}")
    return 0


def _cmd_bootstrap_label(args) -> int:
    corpus = read_corpus(args.corpus)
    hmm = train_hmm(corpus, k=args.k)
    raw = Path(args.raw).read_text(encoding="utf-8")
    labeled = bootstrap_label([raw], hmm)
    write_corpus(labeled, args.out)
    if args.dump_hmm:
        Path(args.dump_hmm).write_text(dump_hmm(hmm), encoding="utf-8")
    print(f"labeled {len(labeled)} sentences to {args.out}")
    return 0


def _cmd_train(args) -> int:
    corpus = read_corpus(args.corpus)
    config = TrainConfig.from_file(args.config) if args.config else TrainConfig()
    model, losses = train(corpus, config)
    for epoch, loss in enumerate(losses, 1):
        print(f"epoch {epoch}/{config.epochs} loss {loss:.6f}")
    save_model(model, args.out)
    print(f"saved model to {args.out}")
    if args.figures:
        from .reports import write_training_report

        for path in write_training_report(losses, args.figures):
            print(f"wrote {path}")
    return 0


def _cmd_eval(args) -> int:
    model = load_model(args.model)
    corpus = read_corpus(args.corpus)
    report = evaluate(model, corpus)
    if args.format == "json":
        print(json.dumps(report.to_dict(), ensure_ascii=False, indent=2))
    else:
        print(report.format_text())
    if args.figures:
        from .reports import write_eval_report

        for path in write_eval_report(report, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_tag(args) -> int:
    model = load_model(args.model)
    if args.text is not None:
        text = args.text
    else:
        text = Path(args.input).read_text(encoding="utf-8")
    doc = tag_text(text, model)
    sys.stdout.write(export_analysis(doc, args.format).decode("utf-8"))
    return 0


def _cmd_gradcheck(args) -> int:
    model, batch = gradcheck_fixture(seed=args.seed)
    err = gradient_check(model, batch, eps=1e-5)
    print(f"max relative error: {err:.3e} (tolerance {GRADCHECK_TOLERANCE:.0e})")
    return 0 if err < GRADCHECK_TOLERANCE else 1


def _cmd_serve(args) -> int:
    from .service import serve

    config = load_config(args.config)
    serve(config)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="turkpos", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="normalize raw text into token lines")
    p.add_argument("--in", dest="input", required=True, metavar="RAW")
    p.add_argument("--out", required=True, metavar="TOKENS")
    p.set_defaults(func=_cmd_preprocess)

    p = sub.add_parser("bootstrap-label", help="HMM-label raw text using a seed corpus")
    p.add_argument("--corpus", required=True, metavar="LABELED_TSV")
    p.add_argument("--raw", required=True, metavar="RAW_TXT")
    p.add_argument("--k", type=float, default=0.01, help="add-k smoothing constant")
    p.add_argument("--out", required=True, metavar="OUT_TSV")
    p.add_argument("--dump-hmm", metavar="JSON", help="also dump probability tables")
    p.set_defaults(func=_cmd_bootstrap_label)

    p = sub.add_parser("train", help="train a tagging model")
    p.add_argument("--corpus", required=True, metavar="TSV")
    p.add_argument("--config", metavar="CFG", help="JSON config (train section or bare)")
    p.add_argument("--out", required=True, metavar="MODEL")
    p.add_argument("--figures", metavar="DIR", help="write loss curve + loss.tsv here")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a labeled corpus")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", required=True, metavar="TSV")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--figures", metavar="DIR", help="write report figures + TSVs here")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("tag", help="tag raw text with a trained model")
    p.add_argument("--model", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--text", help="inline text to tag")
    group.add_argument("--in", dest="input", metavar="FILE", help="file to tag")
    p.add_argument("--format", choices=("tsv", "structured"), default="tsv")
    p.set_defaults(func=_cmd_tag)

    p = sub.add_parser("gradcheck", help="verify analytic gradients on a fixture model")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_gradcheck)

    p = sub.add_parser("serve", help="start the HTTP platform")
    p.add_argument("--config", metavar="CFG")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TaggerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
