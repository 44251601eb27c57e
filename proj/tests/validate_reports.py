"""Runs the CLI once per command and validates every JSON report against the shipped schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, schema_path, fixtures = sys.argv[1], pathlib.Path(sys.argv[2]), pathlib.Path(sys.argv[3])
validator = jsonschema.Draft202012Validator(json.loads(schema_path.read_text()))

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    sdp = {
        "variables": [2],
        "sense": "minimize",
        "objective": [{"var": 0, "row": 0, "col": 0, "value": [2, 0]}, {"var": 0, "row": 1, "col": 1, "value": [1, 0]}],
        "constraints": [{"terms": [{"var": 0, "row": 0, "col": 0, "value": [1, 0]}, {"var": 0, "row": 1, "col": 1, "value": [1, 0]}], "rhs": 1}],
    }
    (tmp / "sdp.json").write_text(json.dumps(sdp))

    runs = [
        (["norm", "dec", "--input", fixtures / "identity_m2.json"], 0),
        (["norm", "cb", "--input", fixtures / "transpose_m2.json"], 0),
        (["norm", "delta", "--input", fixtures / "cp_tensor_m3.json"], 0),
        (["norm", "Delta", "--input", fixtures / "cp_tensor_m3.json"], 0),
        (["norm", "inj", "--input", fixtures / "cp_tensor_m3.json"], 0),
        (["cone-member", "delta", "--input", fixtures / "cp_tensor_m3.json"], 0),
        (["cone-member", "Delta", "--input", fixtures / "cp_tensor_m3.json", "--k-max", "9"], 0),
        (["decompose", "--input", fixtures / "transpose_m2.json"], 0),
        (["verify", "unitary", "--dims", "4", "--trials", "5", "--seed", "7"], 0),
        (["solve-sdp", "--input", tmp / "sdp.json"], 0),
        (["solve-sdp", "--input", tmp / "sdp.json", "--max-iter", "1"], 2),
    ]
    failed = 0
    for i, (args, want) in enumerate(runs):
        p = subprocess.run([cli, *map(str, args)], capture_output=True, text=True)
        label = " ".join(map(str, args[:2]))
        if p.returncode != want:
            print(f"FAIL {label}: exit {p.returncode}, expected {want}\n{p.stderr}")
            failed += 1
            continue
        report = json.loads(p.stdout)
        errors = list(validator.iter_errors(report))
        for e in errors[:3]:
            print(f"FAIL {label}: {e.json_path}: {e.message}")
        failed += bool(errors)
        # Replay through the CLI and validate that report too.
        saved = tmp / f"report{i}.json"
        saved.write_text(p.stdout)
        r = subprocess.run([cli, args[0], "--replay", str(saved)], capture_output=True, text=True)
        if want == 0:
            replayed = json.loads(r.stdout)
            if not replayed["replay"]["matches"] or list(validator.iter_errors(replayed)):
                print(f"FAIL {label}: replay did not reproduce the report")
                failed += 1
    print(f"{len(runs) - failed}/{len(runs)} reports valid")
    sys.exit(1 if failed else 0)
