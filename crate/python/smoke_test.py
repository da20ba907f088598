"""Build the extension module and check both built-in instances from Python.

Run from the repository root:  python3 python/smoke_test.py
"""

import json
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def build_module(dest):
    subprocess.run(
        ["cargo", "build", "--release", "-p", "ggcode-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    lib = ROOT / "target" / "release"
    candidates = [lib / "libggcode.so", lib / "libggcode.dylib", lib / "ggcode.dll"]
    src = next(p for p in candidates if p.exists())
    suffix = ".pyd" if src.suffix == ".dll" else ".so"
    shutil.copy(src, dest / ("ggcode" + suffix))


def main():
    with tempfile.TemporaryDirectory() as tmp:
        build_module(pathlib.Path(tmp))
        sys.path.insert(0, tmp)
        import ggcode

        gc = ggcode.GraphCode.k333()
        assert (gc.length, gc.dimension(), gc.min_distance()) == (27, 19, 3)
        assert gc.theorem_bound() == "2"
        assert gc.lambda2() == 0.0
        edges = gc.edges()
        triangle = [1 if e in {(1, 4), (4, 7), (1, 7)} else 0 for e in edges]
        assert gc.verify(triangle) == (True, [])
        cert = json.loads(gc.certify_json(triangle))
        assert cert["a"] == 1 and cert["final_bound"]["a_holds"]

        big = ggcode.GraphCode.from_spec("complete:3,7", "dsum:hamming:3,hamming:3")
        assert (big.length, big.dimension()) == (147, 48)
        assert big.min_distance(engine="bz") == 9
        assert big.theorem_bound() == "9/2"

        report = json.loads(ggcode.example_report("k777"))
        assert all(c["match"] for c in report["paper_claim_checks"])

        h = ggcode.LinearCode.from_spec("hamming:3")
        assert (h.n, h.k, h.min_distance()) == (7, 4, 3)
        try:
            ggcode.LinearCode.from_spec("hamming:0")
        except ValueError:
            pass
        else:
            raise AssertionError("bad spec accepted")
    print("python smoke test: ok")


if __name__ == "__main__":
    main()
