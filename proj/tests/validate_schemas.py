"""Validate the example instances and every command's --json output against the schemas."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema

cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
instance_schema = json.loads((root / "docs/instance.schema.json").read_text())
output_schema = json.loads((root / "docs/output.schema.json").read_text())
instances = sorted((root / "examples_instances").glob("*.json"))
assert instances, "no example instances"

failures = 0


def check(doc, schema, what):
    global failures
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as e:
        failures += 1
        print(f"FAIL {what}: {e.message}")


def run(*args):
    p = subprocess.run([cli, *args, "--json"], capture_output=True, text=True, timeout=600)
    return json.loads(p.stdout)


for path in instances:
    check(json.loads(path.read_text()), instance_schema, path.name)
    dim = json.loads(path.read_text())["dimension"]
    p = str(path)
    check(run("solve-weak", p), output_schema, f"solve-weak {path.name}")
    check(run("solve-strong", "--auto", p), output_schema, f"solve-strong {path.name}")
    with tempfile.TemporaryDirectory() as tmp:
        check(run("grid", "--out", f"{tmp}/g.csv", p), output_schema, f"grid {path.name}")
    check(run("eval", "--point", ",".join(["0.3"] * dim), p), output_schema, f"eval {path.name}")
    if dim == 2:
        check(run("oracle", "--scan", "--spacing", "0.05", "--threshold", "1", p), output_schema, f"scan {path.name}")

check(run("oracle", "--bisect", str(instances[0])), output_schema, "bisect")
check(run("solve-weak", "/nonexistent.json"), output_schema, "error output")
# an invalid instance must be rejected by the schema
bad = {"dimension": 2, "charges": [{"q": {"num": 1, "den": 0}, "position": [0, 0]}], "domain": {"box": {"lo": [0, 0], "hi": [1, 1]}}}
try:
    jsonschema.validate(bad, instance_schema)
    failures += 1
    print("FAIL zero denominator accepted")
except jsonschema.ValidationError:
    pass

print("schema validation:", "FAIL" if failures else "PASS")
sys.exit(1 if failures else 0)
