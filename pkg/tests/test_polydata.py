import pytest

from src.errors import DataFileError
from src.polydata import body_checksum, list_files, load_named, load_polynomial, normalize
from src.series import VarSet


def _write(tmp_path, body, extra="", checksum=None):
    checksum = checksum or body_checksum(body)
    path = tmp_path / "poly.txt"
    path.write_text(f"# etiqueta: prueba\n# variables: x y\n{extra}# sha256: {checksum}\n{body}",
                    encoding="utf-8")
    return path


def test_normalize_printed_notation():
    assert normalize("2 x (1-x)^{2}") == "2*x*(1-x)**(2)"


def test_small_file_terms(tmp_path):
    poly = load_polynomial(_write(tmp_path, "(1-x) y\n"))
    assert poly.terms() == {(0, 1): 1, (1, 1): -1}
    f = poly.to_series(VarSet.standard(4), 4)
    assert f.coefficient(x=1, y=1) == -1


def test_checksum_mismatch(tmp_path):
    with pytest.raises(DataFileError):
        load_polynomial(_write(tmp_path, "(1-x) y\n", checksum="0" * 64))


def test_correction_applied_after_checksum(tmp_path):
    body = "(1+1x) y\n"
    poly = load_polynomial(_write(tmp_path, body, extra="# correccion: 1+1x => 1+2x\n"))
    assert poly.corrections == [("1+1x", "1+2x")]
    assert poly.terms() == {(0, 1): 1, (1, 1): 2}


def test_correction_must_match_body(tmp_path):
    with pytest.raises(DataFileError):
        load_polynomial(_write(tmp_path, "(1-x) y\n", extra="# correccion: 7x => 8x\n"))


def test_missing_header(tmp_path):
    path = tmp_path / "poly.txt"
    path.write_text("# etiqueta: prueba\nx y\n", encoding="utf-8")
    with pytest.raises(DataFileError):
        load_polynomial(path)


def test_shipped_files_load():
    names = list_files()
    assert {"bimodal2_A", "convex2_A", "convex_st_A", "staircase2_B", "unimodal2_B"} <= set(names)
    for name in names:
        assert load_named(name).terms()


def test_recorded_correction():
    assert load_named("bimodal2_A").corrections == [("(20+21+15x^2)", "(20+21x+15x^2)")]


def test_canonical_text_columns():
    first = load_named("staircase2_A").canonical_text().splitlines()[0].split()
    # e_s e_t e_x e_y coeficiente
    assert len(first) == 5
