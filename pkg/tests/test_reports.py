from turkpos.reports import write_eval_report, write_training_report
from turkpos.trainer import evaluate


def test_training_report_files(tmp_path):
    losses = [2.0, 1.5, 1.1, 0.9]
    created = write_training_report(losses, tmp_path)
    assert sorted(p.name for p in created) == ["loss.png", "loss.tsv"]
    lines = (tmp_path / "loss.tsv").read_text().splitlines()
    assert lines[0] == "epoch\tloss"
    assert len(lines) == 1 + len(losses)
    assert (tmp_path / "loss.png").stat().st_size > 0


def test_eval_report_files(tmp_path, trained, sample_corpus):
    model, _ = trained
    report = evaluate(model, sample_corpus)
    created = write_eval_report(report, tmp_path / "out")
    names = sorted(p.name for p in created)
    assert names == ["confusion.png", "confusion.tsv", "metrics.tsv", "per_tag.png"]
    metrics = (tmp_path / "out" / "metrics.tsv").read_text().splitlines()
    assert metrics[0] == "tag\tprecision\trecall\tsupport"
    # one row per real tag plus the accuracy footer
    assert len(metrics) == 1 + len(report.per_tag) + 1
    confusion = (tmp_path / "out" / "confusion.tsv").read_text().splitlines()
    assert len(confusion) == 1 + len(report.tag_names)
