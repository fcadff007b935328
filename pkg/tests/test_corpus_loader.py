import pytest

from utils.corpus_loader import parse_corpus_line, read_corpus, write_corpus
from utils.errors import LaminationError


@pytest.mark.parametrize("line", ["", "   \n", "# only a comment", "  # indented comment"])
def test_blank_and_comment_lines(line):
    assert parse_corpus_line(line) == []


def test_valid_line_with_trailing_comment():
    assert parse_corpus_line("0.1 2.5 1.5 0  # leaf") == [0.1, 2.5, 1.5]


@pytest.mark.parametrize("line", ["0.1 2.5 1.5", "0.1 2.5 x 0", "0.1 2.5 1.5 1"])
def test_malformed_lines(line):
    with pytest.raises(LaminationError, match="line 7"):
        parse_corpus_line(line, 7)


def test_write_then_read(tmp_path):
    rows = [(0.1, 2.5, 1.0), (3.0, 4.0 / 3.0, 0.25)]
    path = tmp_path / "nested" / "corpus.txt"
    write_corpus(rows, str(path), header="two leaves\nsecond header line")
    assert path.read_text(encoding="utf-8").startswith("# two leaves\n# second header line\n")
    assert read_corpus(str(path)) == rows


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        read_corpus(str(tmp_path / "absent.txt"))


def test_data_corpus_files(data_dir):
    for name in ("fence_three.txt", "dense_fence.txt", "single_leaf.txt"):
        rows = read_corpus(str(data_dir / "laminations" / name))
        assert rows
        assert all(weight > 0 for _, _, weight in rows)
