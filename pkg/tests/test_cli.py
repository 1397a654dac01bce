"""
The riembill command: sub-commands, their files and exit codes.
"""
# standard libraries imports
import os
import json

# external libraries imports
import pytest

# riembill imports
from riembill.Cli import main, get_parser, EXIT_SUCCESS, EXIT_VALIDATION, EXIT_IO
from riembill import Output


def _write_config(tmp_path, **overrides):
    data = {"schema":1,
            "domain":{"type":"circle", "center":[3., 0.], "radius":12.},
            "obstacles":[{"type":"circle", "center":[0., 0.], "radius":1., "name":"left"},
                         {"type":"circle", "center":[6., 0.], "radius":1., "name":"right"}],
            "sampling":{"curveSamples":512, "monteCarloChords":200, "bitangentSeeds":16,
                        "nStart":4, "nDirections":4, "stations":4},
            "trapping":{"nSamples":256, "nRays":4, "bounces":10}}
    data.update(overrides)
    path = str(tmp_path/"scene.json")
    with open(path, "w") as fd:
        json.dump(data, fd)
    return path

def _run(tmp_path, command, config, *extra):
    out = str(tmp_path/"run")
    return main([command, "--config", config, "--out", out, "--quiet"]+list(extra)), out


class TestParser(object):
    def test_commands(self):
        parser = get_parser()
        args = parser.parse_args(["echograph", "--config", "c.json", "--x1", "0.5", "--max-order", "2"])
        assert args.command == "echograph"
        assert args.x1 == 0.5 and args.maxOrder == 2
        args = parser.parse_args(["reconstruct", "--config", "c.json", "--refine", "--threads", "2"])
        assert args.refine and args.threads == 2

    def test_config_is_required(self):
        with pytest.raises(SystemExit):
            get_parser().parse_args(["validate"])

    def test_verbosity_flags_exclusive(self):
        with pytest.raises(SystemExit):
            get_parser().parse_args(["validate", "--config", "c.json", "--verbose", "--quiet"])


class TestExitCodes(object):
    def test_validate(self, tmp_path):
        code, out = _run(tmp_path, "validate", _write_config(tmp_path))
        assert code == EXIT_SUCCESS
        with open(os.path.join(out, "validation.json")) as fd:
            report = json.load(fd)
        assert report["passed"]

    def test_validate_overlapping(self, tmp_path):
        obstacles = [{"type":"circle", "center":[0., 0.], "radius":1.},
                     {"type":"circle", "center":[1., 0.], "radius":1.}]
        code, _ = _run(tmp_path, "validate", _write_config(tmp_path, obstacles=obstacles))
        assert code == EXIT_VALIDATION

    def test_missing_config(self, tmp_path):
        code, _ = _run(tmp_path, "validate", str(tmp_path/"missing.json"))
        assert code == EXIT_IO

    def test_bad_json(self, tmp_path):
        path = str(tmp_path/"broken.json")
        with open(path, "w") as fd:
            fd.write('{"schema": 1,,}')
        code, _ = _run(tmp_path, "validate", path)
        assert code == EXIT_VALIDATION

    def test_unknown_key(self, tmp_path):
        code, _ = _run(tmp_path, "validate", _write_config(tmp_path, colour="red"))
        assert code == EXIT_VALIDATION

    def test_invalid_override(self, tmp_path):
        code, _ = _run(tmp_path, "validate", _write_config(tmp_path), "--stations", "0")
        assert code == EXIT_VALIDATION

    def test_echograph_needs_dataset(self, tmp_path):
        code, _ = _run(tmp_path, "echograph", _write_config(tmp_path))
        assert code == EXIT_IO

    def test_reconstruct_needs_dataset(self, tmp_path):
        code, _ = _run(tmp_path, "reconstruct", _write_config(tmp_path))
        assert code == EXIT_IO


class TestCommands(object):
    def test_bitangents(self, tmp_path):
        code, out = _run(tmp_path, "bitangents", _write_config(tmp_path))
        assert code == EXIT_SUCCESS
        header, rows = Output.read_table(os.path.join(out, "bitangents.csv"))
        assert len(rows) == 8
        with open(os.path.join(out, "bitangents.json")) as fd:
            report = json.load(fd)
        assert report["directed"] == 8
        assert report["obstacles"] == 2
        assert report["signRule"] == {"0-1":True}

    def test_generate_and_resume(self, tmp_path):
        config = _write_config(tmp_path)
        code, out = _run(tmp_path, "generate", config)
        assert code == EXIT_SUCCESS
        first = Output.read_dataset(os.path.join(out, "dataset.csv"))
        assert 0 < len(first) <= 16
        code, _ = _run(tmp_path, "generate", config)
        assert code == EXIT_SUCCESS
        second = Output.read_dataset(os.path.join(out, "dataset.csv"))
        assert [(s.xIndex, s.directionIndex) for s in second] == [(s.xIndex, s.directionIndex) for s in first]
        assert [s.t for s in second] == [s.t for s in first]
        assert os.path.isfile(os.path.join(out, "generate.json"))

    @pytest.mark.slow
    def test_trapping(self, tmp_path):
        code, out = _run(tmp_path, "trapping", _write_config(tmp_path))
        assert code == EXIT_SUCCESS
        assert os.path.isfile(os.path.join(out, "trapping.svg"))
        with open(os.path.join(out, "trapping.json")) as fd:
            report = json.load(fd)
        assert report["foci"]["maxMiss"] < 1e-6
        assert report["control"]["escapes"] == 1
