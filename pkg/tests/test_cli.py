import subprocess
import sys

import numpy as np
import pytest

from ift_watershed.cli import EXIT_FORMAT, EXIT_INVALID, EXIT_IO, EXIT_USAGE, main
from ift_watershed.engine import MarkerSet, run_ift
from ift_watershed.errors import FormatError, MarkerOutOfRangeError, ValueRangeError
from ift_watershed.formats import (
    export_slice,
    format_markers,
    load_raw_volume,
    parse_dims,
    parse_markers,
    read_labels,
    read_pgm,
    save_raw_volume,
    write_labels,
)
from ift_watershed.synthgen import GenSpec, generate
from ift_watershed.volume import Volume


def test_load_raw_8bit(tmp_path):
    p = tmp_path / "v.raw"
    p.write_bytes(bytes([0x00, 0x09]))
    assert load_raw_volume(p, (1, 1, 2), 8).values.tolist() == [0, 9]


def test_load_raw_12bit_range(tmp_path):
    p = tmp_path / "v.raw"
    p.write_bytes(bytes([0xFF, 0x0F]))
    assert load_raw_volume(p, (1, 1, 1), 12).values.tolist() == [4095]
    p.write_bytes(bytes([0x00, 0x10]))
    with pytest.raises(ValueRangeError):
        load_raw_volume(p, (1, 1, 1), 12)


def test_load_raw_truncated(tmp_path):
    p = tmp_path / "v.raw"
    p.write_bytes(bytes(7))
    with pytest.raises(FormatError):
        load_raw_volume(p, (2, 2, 2), 8)


def test_raw_roundtrip_16bit(tmp_path):
    vol = generate(GenSpec("noise", (3, 4, 5), low=0, high=65535, seed=3, bit_depth=16))
    save_raw_volume(vol, tmp_path / "v.raw")
    assert load_raw_volume(tmp_path / "v.raw", (3, 4, 5), 16) == vol


def test_parse_markers():
    text = "# seeds\nin 0 0 0\nOUT 1 0 1  # bg\n\nin 1 1 1\n"
    m = parse_markers(text, (2, 2, 2))
    assert m.in_markers == (0, 7) and m.out_markers == (5,)
    assert parse_markers(format_markers(m, (2, 2, 2)), (2, 2, 2)) == m
    with pytest.raises(FormatError):
        parse_markers("inside 0 0 0", (2, 2, 2))
    with pytest.raises(MarkerOutOfRangeError):
        parse_markers("in 2 0 0", (2, 2, 2))


def test_parse_dims():
    assert parse_dims("128x128x79") == (128, 128, 79)
    with pytest.raises(FormatError):
        parse_dims("12x3")


@pytest.mark.parametrize(
    "vals,ins,outs,expected",
    [([5] * 5, [0], [4], [1, 1, 1, 0, 0]), ([0, 0, 9, 9], [0], [3], [1, 1, 0, 0])],
)
def test_write_labels(tmp_path, vals, ins, outs, expected):
    vol = Volume((1, 1, len(vals)), vals)
    r = run_ift(vol, MarkerSet(ins, outs), "V")
    write_labels(r.labels, tmp_path / "l.bin")
    assert (tmp_path / "l.bin").read_bytes() == bytes(expected)
    assert np.array_equal(read_labels(tmp_path / "l.bin", vol.n), r.labels)


def test_export_slice_labels(tmp_path):
    dims = (3, 2, 5)
    labels = np.ones(30, dtype=np.uint8)
    assert export_slice(labels, "z", 2, tmp_path / "s.pgm", dims=dims) == (3, 2)
    raw = (tmp_path / "s.pgm").read_bytes()
    assert raw.startswith(b"P5\n3 2\n255\n")
    assert raw[len(b"P5\n3 2\n255\n"):] == bytes([255] * 6)
    assert export_slice(labels, "x", 0, tmp_path / "x.pgm", dims=dims) == (2, 5)
    assert export_slice(labels, "y", 1, tmp_path / "y.pgm", dims=dims) == (3, 5)
    with pytest.raises(IndexError):
        export_slice(labels, "z", 5, tmp_path / "bad.pgm", dims=dims)


def test_export_slice_intensity_window(tmp_path):
    vol = Volume((3, 1, 1), [100, 150, 200])
    export_slice(vol, "z", 0, tmp_path / "v.pgm")
    assert read_pgm(tmp_path / "v.pgm").tolist() == [[0, 127, 255]]


def _gen_args(tmp_path, variant, out="l.bin"):
    return [
        "--gen", "noise:seed=42,low=0,high=255", "--dims", "8x8x8", "--variant", variant,
        "--out", str(tmp_path / out), "--stats", str(tmp_path / f"{out}.txt"), "-q",
    ]


def test_cli_generated_noise(tmp_path):
    assert main(_gen_args(tmp_path, "V") + ["--slice", f"z:3:{tmp_path / 's.pgm'}"]) == 0
    assert (tmp_path / "l.bin").stat().st_size == 512
    assert read_pgm(tmp_path / "s.pgm").shape == (8, 8)
    stats = (tmp_path / "l.bin.txt").read_text()
    assert "variant=V\n" in stats and "bricks_peak=" in stats


def test_cli_variants_byte_identical(tmp_path):
    assert main(_gen_args(tmp_path, "I", "a.bin")) == 0
    assert main(_gen_args(tmp_path, "V", "b.bin")) == 0
    assert (tmp_path / "a.bin").read_bytes() == (tmp_path / "b.bin").read_bytes()


def test_cli_deterministic_stats(tmp_path):
    main(_gen_args(tmp_path, "IV", "a.bin"))
    main(_gen_args(tmp_path, "IV", "b.bin"))
    strip = lambda p: [l for l in p.read_text().splitlines() if not l.startswith("wall_time")]  # noqa: E731,E741
    assert strip(tmp_path / "a.bin.txt") == strip(tmp_path / "b.bin.txt")


def test_cli_raw_input(tmp_path):
    (tmp_path / "v.raw").write_bytes(bytes([0, 0, 9, 9]))
    (tmp_path / "m.txt").write_text("in 0 0 0\nout 0 0 3\n")
    rc = main([
        "--input", str(tmp_path / "v.raw"), "--dims", "1x1x4", "--markers", str(tmp_path / "m.txt"),
        "--variant", "III", "--out", str(tmp_path / "l.bin"), "-q",
    ])
    assert rc == 0
    assert (tmp_path / "l.bin").read_bytes() == bytes([1, 1, 0, 0])


def test_cli_errors(tmp_path, capsys):
    base = ["--dims", "1x1x4", "--out", str(tmp_path / "l.bin"), "-q"]
    (tmp_path / "v.raw").write_bytes(bytes(4))
    assert main(["--input", str(tmp_path / "v.raw")] + base) == EXIT_USAGE
    assert main(base) == EXIT_USAGE
    (tmp_path / "m.txt").write_text("in 0 0 0\nout 0 0 0\n")
    m = ["--markers", str(tmp_path / "m.txt")]
    assert main(["--input", str(tmp_path / "v.raw")] + m + base) == EXIT_INVALID
    (tmp_path / "short.raw").write_bytes(bytes(3))
    assert main(["--input", str(tmp_path / "short.raw")] + m + base) == EXIT_FORMAT
    assert main(["--input", str(tmp_path / "missing.raw")] + m + base) == EXIT_IO
    err = capsys.readouterr().err
    assert "error:" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "ift_watershed", "--gen", "uniform:value=3", "--dims", "2x2x2",
         "--marker-pattern", "chessboard", "--out", str(tmp_path / "l.bin")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert "propagation" not in proc.stdout
    assert "skipped_pops=" in proc.stdout
    assert (tmp_path / "l.bin").read_bytes() == bytes([1, 0, 0, 1, 0, 1, 1, 0])
