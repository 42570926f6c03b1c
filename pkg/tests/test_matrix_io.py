import numpy as np
import pytest

from qensemble import (
    ValidationError,
    read_matrix_csv,
    write_curve_csv,
    write_matrix_csv,
)


class TestRoundTrip:
    def test_values_survive_exactly(self, matrix_factory, tmp_path):
        matrix = matrix_factory(seed=300, n=7, m=45)
        path = tmp_path / "pool.csv"
        write_matrix_csv(matrix, path)
        back = read_matrix_csv(path)
        assert np.array_equal(back.scores, matrix.scores)
        assert np.array_equal(back.labels, matrix.labels)
        assert back.predictor_ids == matrix.predictor_ids

    def test_writes_are_byte_stable(self, matrix_factory, tmp_path):
        matrix = matrix_factory(seed=301, n=3, m=20)
        first = tmp_path / "a.csv"
        second = tmp_path / "b.csv"
        write_matrix_csv(matrix, first)
        write_matrix_csv(read_matrix_csv(first), second)
        assert first.read_bytes() == second.read_bytes()

    def test_layout(self, tmp_path):
        from qensemble import PredictionMatrix

        matrix = PredictionMatrix([[0.5, 1.0], [0.25, 0.0]], [1, 0], ("a", "b"))
        path = tmp_path / "tiny.csv"
        write_matrix_csv(matrix, path)
        assert path.read_text() == (
            "example_id,label,a,b\n"
            "e0,1,0.5,0.25\n"
            "e1,0,1.0,0.0\n"
        )


class TestReadErrors:
    def write(self, tmp_path, text):
        path = tmp_path / "bad.csv"
        path.write_text(text)
        return path

    def test_empty_file(self, tmp_path):
        with pytest.raises(ValidationError, match="empty"):
            read_matrix_csv(self.write(tmp_path, ""))

    def test_wrong_header(self, tmp_path):
        path = self.write(tmp_path, "id,label,a\nx,1,0.5\n")
        with pytest.raises(ValidationError, match="header"):
            read_matrix_csv(path)

    def test_no_predictor_columns(self, tmp_path):
        path = self.write(tmp_path, "example_id,label\ne0,1\n")
        with pytest.raises(ValidationError, match="predictor"):
            read_matrix_csv(path)

    def test_no_rows(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a\n")
        with pytest.raises(ValidationError, match="rows"):
            read_matrix_csv(path)

    def test_bad_label(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a\ne0,2,0.5\n")
        with pytest.raises(ValidationError, match="label"):
            read_matrix_csv(path)

    def test_bad_score(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a\ne0,1,high\n")
        with pytest.raises(ValidationError, match="2"):
            read_matrix_csv(path)

    def test_out_of_range_score(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a\ne0,1,1.5\n")
        with pytest.raises(ValidationError):
            read_matrix_csv(path)

    def test_ragged_row(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a,b\ne0,1,0.5\n")
        with pytest.raises(ValidationError, match="fields"):
            read_matrix_csv(path)

    def test_duplicate_predictor_ids(self, tmp_path):
        path = self.write(tmp_path, "example_id,label,a,a\ne0,1,0.5,0.6\n")
        with pytest.raises(ValidationError):
            read_matrix_csv(path)


class TestCurveCsv:
    def test_layout(self, tmp_path):
        points = [
            {"pool_size": 10, "mean_fmax": 0.5, "stderr": 0.01, "mean_size": 3.5},
            {"pool_size": 20, "mean_fmax": 0.625, "stderr": 0.0, "mean_size": 4.0},
        ]
        path = tmp_path / "curve.csv"
        write_curve_csv(points, path)
        assert path.read_text() == (
            "pool_size,mean_fmax,stderr,mean_size\n"
            "10,0.5,0.01,3.5\n"
            "20,0.625,0.0,4.0\n"
        )
