#!/usr/bin/env python3
"""
Test the kmermis command line (exit codes and written files).
"""

import kmer_test_utils  # noqa: F401  (sets up sys.path)

import argparse
import json
import logging

import pytest

from kmermis.cli import EXIT_ERROR, EXIT_INVALID, EXIT_OK, format_bytes, main, parse_bytes
from kmermis.verify import MisVerifier, VerificationReport


@pytest.fixture(autouse=True)
def reset_logging():
    yield
    logging.getLogger().handlers.clear()


QUIET = ['--log-level', 'WARNING', '--log-file', '']


def run(*args):
    return main(QUIET + [str(a) for a in args])


def test_parse_bytes():
    assert parse_bytes("1024") == 1024
    assert parse_bytes("8G") == 8 * 1024 ** 3
    assert parse_bytes("512M") == 512 * 1024 ** 2
    assert parse_bytes("1.5k") == 1536
    assert parse_bytes("2GiB") == 2 * 1024 ** 3
    with pytest.raises(argparse.ArgumentTypeError):
        parse_bytes("lots")


def test_format_bytes():
    assert format_bytes(None) == '-'
    assert format_bytes(512) == "512 B"
    assert format_bytes(2048) == "2.0 KiB"
    assert format_bytes(3 * 1024 ** 3) == "3.0 GiB"


def test_compute_and_verify(tmp_path, capsys):
    out = tmp_path / "mis.txt"
    assert run('compute', '-k', 6, '-d', 2, '--algo', 3, '--out', out) == EXIT_OK
    assert out.read_text().splitlines()[0] == "#k=6 d=2 size=96 algo=3 order=lex"
    capsys.readouterr()

    assert run('verify', out) == EXIT_OK
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record['ok'] is True
    assert record['size'] == 96


def test_verify_rejects_a_bad_set(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("#k=3 d=1 size=1 algo=1 order=lex\nAAA\n")
    assert run('verify', bad) == EXIT_INVALID
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record['maximal'] is False
    assert record['witness'] == ["ACC"]


def test_errors_exit_with_two(tmp_path):
    assert run('compute', '-k', 4, '-d', 4) == EXIT_ERROR
    assert run('compute', '-k', 16, '-d', 2) == EXIT_ERROR
    assert run('compute', '-k', 12, '-d', 2, '--algo', 3, '--mem-limit', '1K') == EXIT_ERROR
    assert run('verify', tmp_path / "missing.txt") == EXIT_ERROR
    malformed = tmp_path / "malformed.txt"
    malformed.write_text("k=3 d=1\nAAA\n")
    assert run('verify', malformed) == EXIT_ERROR
    for d in (-1, 3, 7):
        out_of_range = tmp_path / f"d{d}.txt"
        out_of_range.write_text(f"#k=3 d={d} size=1 algo=1 order=lex\nAAA\n")
        assert run('verify', out_of_range) == EXIT_ERROR, d


def test_dry_run_allocates_nothing(tmp_path, capsys):
    out = tmp_path / "mis.txt"
    assert run('compute', '-k', 14, '-d', 3, '--dry-run', '--out', out) == EXIT_OK
    assert not out.exists()
    assert "Algorithm 3" in capsys.readouterr().out


def test_compute_with_verification_and_stats(tmp_path):
    stats = tmp_path / "stats.jsonl"
    assert run('compute', '-k', 5, '-d', 2, '--algo', 2, '--verify', '--stats', stats) == EXIT_OK
    record = json.loads(stats.read_text().splitlines()[0])
    assert record['mis_size'] == 36
    assert record['verified'] is True


def test_lookup(tmp_path, capsys):
    out, mapping = tmp_path / "mis.txt", tmp_path / "mis.map"
    assert run('compute', '-k', 4, '-d', 3, '--out', out, '--mapping', mapping) == EXIT_OK
    capsys.readouterr()
    assert run('lookup', '--mis', out, '--mapping', mapping, 'AAAC', 'GGTG', 'ACG') == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "AAAC\tAAAA"
    assert lines[1] == "GGTG\tGGGG"
    assert lines[2].startswith("ACG\t-")

    kmers = tmp_path / "queries.txt"
    kmers.write_text("# queries\nTTTA\n")
    assert run('lookup', '--mis', out, '--mapping', mapping, '--kmers-file', kmers) == EXIT_OK
    assert capsys.readouterr().out.strip() == "TTTA\tTTTT"


def test_table(tmp_path, capsys):
    csv_path = tmp_path / "table.csv"
    assert run('table', '--k-max', 4, '--workers', 1, '--out', csv_path) == EXIT_OK
    output = capsys.readouterr().out
    assert "MIS sizes" in output
    assert len(csv_path.read_text().splitlines()) == 1 + 6


def test_table_where_every_cell_fails(tmp_path, capsys):
    csv_path = tmp_path / "table.csv"
    assert run('table', '--k-max', 3, '--workers', 1, '--mem-limit', 1, '--out', csv_path) == EXIT_OK
    output = capsys.readouterr().out
    assert "MIS sizes" in output
    assert "k=2, d=1" in output and "k=3, d=2" in output
    assert len(csv_path.read_text().splitlines()) == 1 + 3


def test_failed_verification_writes_nothing(tmp_path, capsys, monkeypatch):
    monkeypatch.setattr(MisVerifier, 'verify_mis',
                        lambda self, result, **kwargs: VerificationReport(independent=True, maximal=False))
    out, mapping = tmp_path / "mis.txt", tmp_path / "mis.map"
    assert run('compute', '-k', 4, '-d', 3, '--verify', '--out', out, '--mapping', mapping) == EXIT_INVALID
    assert not out.exists() and not mapping.exists()
    output = capsys.readouterr().out
    assert "Verification failed" in output
    assert "written to" not in output


if __name__ == "__main__":
    test_parse_bytes()
    test_format_bytes()
    print("✓ CLI tests passed (run with pytest for the tmp_path tests)")
