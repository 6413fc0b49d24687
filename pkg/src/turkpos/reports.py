"""Render evaluation and training reports to files.

Each report writes delimited (TSV) data plus matplotlib figures next to
it, so results are both machine-readable and human-scannable.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .trainer import EvalReport


def write_training_report(loss_history: list[float], outdir: str | Path) -> list[Path]:
    """Write loss.tsv and loss.png; returns the created paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    tsv = outdir / "loss.tsv"
    lines = ["epoch\tloss"] + [f"{i}\t{loss:.10g}" for i, loss in enumerate(loss_history, 1)]
    tsv.write_text("\n".join(lines) + "\n", encoding="utf-8")

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(range(1, len(loss_history) + 1), loss_history, lw=1.5)
    ax.set_xlabel("epoch")
    ax.set_ylabel("mean cross-entropy per token")
    ax.set_title("training loss")
    ax.grid(alpha=0.3)
    fig.tight_layout()
    png = outdir / "loss.png"
    fig.savefig(png, dpi=150)
    plt.close(fig)
    return [tsv, png]


def write_eval_report(report: EvalReport, outdir: str | Path) -> list[Path]:
    """Write metrics.tsv, confusion.tsv, per_tag.png and confusion.png."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    created = []

    metrics = outdir / "metrics.tsv"
    lines = ["tag\tprecision\trecall\tsupport"]
    for tag, m in report.per_tag.items():
        lines.append(f"{tag}\t{m.precision:.6f}\t{m.recall:.6f}\t{m.support}")
    lines.append(f"__accuracy__\t{report.token_accuracy:.6f}\t\t")
    metrics.write_text("\n".join(lines) + "\n", encoding="utf-8")
    created.append(metrics)

    conf_tsv = outdir / "confusion.tsv"
    header = "gold\\pred\t" + "\t".join(report.tag_names)
    rows = [header]
    for name, row in zip(report.tag_names, report.confusion):
        rows.append(name + "\t" + "\t".join(str(int(v)) for v in row))
    conf_tsv.write_text("\n".join(rows) + "\n", encoding="utf-8")
    created.append(conf_tsv)

    # Figures show only real tags; the PAD row/column is zero by construction.
    real = report.tag_names[1:]
    conf = report.confusion[1:, 1:]

    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(real)), max(3.5, 0.6 * len(real))))
    im = ax.imshow(conf, cmap="Blues")
    ax.set_xticks(range(len(real)), real, rotation=45, ha="right")
    ax.set_yticks(range(len(real)), real)
    ax.set_xlabel("predicted")
    ax.set_ylabel("gold")
    ax.set_title("confusion matrix")
    for i in range(len(real)):
        for j in range(len(real)):
            if conf[i, j]:
                ax.text(j, i, str(int(conf[i, j])), ha="center", va="center", fontsize=8)
    fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    conf_png = outdir / "confusion.png"
    fig.savefig(conf_png, dpi=150)
    plt.close(fig)
    created.append(conf_png)

    fig, ax = plt.subplots(figsize=(max(5, 0.9 * len(real)), 4))
    x = np.arange(len(real))
    width = 0.38
    ax.bar(x - width / 2, [report.per_tag[t].precision for t in real], width, label="precision")
    ax.bar(x + width / 2, [report.per_tag[t].recall for t in real], width, label="recall")
    ax.set_xticks(x, real, rotation=45, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_title(f"per-tag metrics (token accuracy {report.token_accuracy:.3f})")
    ax.legend()
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    bars_png = outdir / "per_tag.png"
    fig.savefig(bars_png, dpi=150)
    plt.close(fig)
    created.append(bars_png)
    return created
