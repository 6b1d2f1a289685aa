"""End-to-end tests of the prefforge command line and HTTP service.

Usage: test_cli.py <prefforge binary> <source dir> <work dir>
"""

import filecmp
import json
import pathlib
import shutil
import subprocess
import sys
import time
import unittest
import urllib.error
import urllib.request

from jsonschema import Draft202012Validator
from referencing import Registry, Resource

CLI = ""
SOURCE = pathlib.Path()
WORK = pathlib.Path()

FIXTURE_TEXT = (
    "if (S_cv < 83) ⇒ S = (1/28)(6 × S_cv + 2 × S_el + 9 × S_sq + 2 × S_gr + 2 × S_or + 7 × S_sz)\n"
    "if (83 ≤ S_cv < 93) ⇒ S = (1/28)(7 × S_cv + 7 × S_el + 1 × S_sq + 7 × S_gr + 6 × S_sz)\n"
    "if (S_cv ≥ 93) ⇒ S = (1/30)(9 × S_cv + 9 × S_el + 3 × S_sq + 2 × S_gr + 7 × S_sz)\n"
)


def run(*args, stdin=None):
    return subprocess.run([CLI, *map(str, args)], input=stdin, capture_output=True, text=True, timeout=300)


class Schemas:
    def __init__(self, directory):
        self.registry = Registry()
        self.schemas = {}
        for path in sorted(directory.glob("*.schema.json")):
            schema = json.loads(path.read_text())
            Draft202012Validator.check_schema(schema)
            self.registry = self.registry.with_resource(schema["$id"], Resource.from_contents(schema))
            self.schemas[path.name.removeprefix("prefforge-").removesuffix(".schema.json")] = schema

    def errors(self, kind, value):
        validator = Draft202012Validator(self.schemas[kind], registry=self.registry)
        return [f"{list(e.absolute_path)}: {e.message}" for e in validator.iter_errors(value)]


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.fixture = SOURCE / "data" / "building_fixture"
        cls.schemas = Schemas(SOURCE / "schemas")
        shutil.rmtree(WORK, ignore_errors=True)
        WORK.mkdir(parents=True)

    def conforms(self, kind, path_or_value):
        value = path_or_value
        if isinstance(path_or_value, pathlib.Path):
            value = json.loads(path_or_value.read_text())
        self.assertEqual(self.schemas.errors(kind, value), [], kind)

    def ok(self, *args, stdin=None):
        result = run(*args, stdin=stdin)
        self.assertEqual(result.returncode, 0, result.stderr)
        return result

    def test_elicit_skips_answered_comparisons(self):
        out = WORK / "reanswered.json"
        result = self.ok("elicit", "--set", self.fixture / "test_set.json", "--max-questions", 5, "--out", out,
                         stdin="")
        self.assertIn("session finished: 0 answers", result.stdout)
        self.assertEqual(json.loads(out.read_text())["preferences"],
                         json.loads((self.fixture / "test_set.json").read_text())["preferences"])

    def test_exit_codes(self):
        self.assertEqual(run().returncode, 1)
        self.assertEqual(run("learn", "--set", self.fixture / "learning_set.json").returncode, 1)
        self.assertEqual(run("no-such-command").returncode, 1)

        broken = WORK / "broken.json"
        broken.write_text('{"schema": {}}')
        self.assertEqual(run("render", "--function", broken).returncode, 2)

        versionless = json.loads((self.fixture / "function.json").read_text())
        del versionless["format_version"]
        (WORK / "versionless.json").write_text(json.dumps(versionless))
        self.assertEqual(run("render", "--function", WORK / "versionless.json").returncode, 2)

        blocked = WORK / "blocked"
        blocked.write_text("")
        result = run("fixture", "--out-dir", blocked / "sub")
        self.assertEqual(result.returncode, 3, result.stderr)

    def test_eval_fixture(self):
        result = self.ok("eval", "--function", self.fixture / "function.json", "--set",
                         self.fixture / "learning_set.json")
        self.assertEqual(result.stdout.strip(), "incompatible: 5, global_error: 4.25")
        result = self.ok("eval", "--function", self.fixture / "function.json", "--set",
                         self.fixture / "test_set.json")
        self.assertEqual(result.stdout.strip(), "incompatible: 5, global_error: 4.63")

    def test_render_fixture(self):
        self.assertEqual(self.ok("render", "--function", self.fixture / "function.json").stdout, FIXTURE_TEXT)

    def test_fixture_regenerates_identically(self):
        out = WORK / "fixture"
        self.ok("fixture", "--out-dir", out)
        for name in ("function.json", "learning_set.json", "test_set.json"):
            self.assertTrue(filecmp.cmp(out / name, self.fixture / name, shallow=False), name)
        self.conforms("function", out / "function.json")
        self.conforms("set", out / "learning_set.json")
        self.conforms("set", out / "test_set.json")

    def test_learn_is_deterministic(self):
        outputs = []
        for i in range(2):
            out = WORK / f"learned{i}.json"
            self.ok("learn", "--set", self.fixture / "learning_set.json", "--val-error", 40, "--seed", 7,
                    "--out", out, "--trace")
            outputs.append((out.read_bytes(), out.with_suffix(".report.json").read_bytes()))
            self.conforms("function", out)
            self.conforms("report", out.with_suffix(".report.json"))
        self.assertEqual(outputs[0], outputs[1])

        report = json.loads((WORK / "learned0.report.json").read_text())
        self.assertNotIn("wall_time_ms", report)
        self.assertIn("ga_trace", report["iterations"][0])
        result = self.ok("eval", "--function", WORK / "learned0.json", "--set", self.fixture / "learning_set.json")
        self.assertEqual(result.stdout.strip(),
                         f"incompatible: {report['final_incompatible']}, global_error: {report['final_error']:.6g}")

    def test_synth_generate_simulate(self):
        instances = WORK / "instances.json"
        self.ok("synth", "--count", 20, "--solutions", 5, "--seed", 3, "--out", instances)
        self.conforms("instances", instances)
        self.assertNotEqual(self.schemas.errors("set", json.loads(instances.read_text())), [])

        config = WORK / "generation.json"
        config.write_text(json.dumps({"format_version": "1", "pairs_per_instance": 4, "seed": 5}))
        self.conforms("generation-config", config)
        comparisons = WORK / "generated.json"
        self.ok("generate", "--instances", instances, "--config", config, "--out", comparisons)
        self.conforms("set", comparisons)
        generated = json.loads(comparisons.read_text())
        self.assertEqual(len(generated["comparisons"]), 80)
        self.assertEqual(generated["preferences"], {})

        function = json.loads((self.fixture / "function.json").read_text())
        oracle = WORK / "oracle.json"
        oracle.write_text(json.dumps({"format_version": "1", "seed": 2, "tie_band": 0.5, "flip_probability": 0.0,
                                      "ground_truth": {"schema": function["schema"], "rules": function["rules"]}}))
        self.conforms("oracle", oracle)
        simulation = WORK / "simulation.json"
        simulation.write_text(json.dumps({"format_version": "1", "max_questions": 40, "seed": 4,
                                          "learn": {"ga": {"generations": 80}}}))
        self.conforms("simulation", simulation)
        reports = []
        for i in range(2):
            out = WORK / f"closed_loop{i}.json"
            self.ok("simulate", "--instances", instances, "--oracle", oracle, "--config", simulation, "--out", out)
            self.conforms("closed-loop", out)
            reports.append(out.read_bytes())
        self.assertEqual(reports[0], reports[1])
        report = json.loads(reports[0])
        self.assertEqual(report["train"]["comparisons"], report["learn_report"]["comparisons"])
        self.assertLessEqual(report["train"]["comparisons"], 40)

    def test_scripted_elicit(self):
        unanswered = WORK / "unanswered.json"
        fresh = json.loads((self.fixture / "test_set.json").read_text())
        fresh["preferences"] = {}
        unanswered.write_text(json.dumps(fresh))
        answered = WORK / "answered.json"
        session = WORK / "session.json"
        result = self.ok("elicit", "--set", unanswered, "--max-questions", 6, "--seed", 2,
                         "--out", answered, "--session", session, stdin="1\n2\nx\nt\nq\n")
        self.assertIn("stopped after 3 answers", result.stdout)
        self.conforms("set", answered)
        self.conforms("session", session)
        state = json.loads(session.read_text())
        self.assertEqual(len(state["asked"]), 3)
        self.assertIsNotNone(state["pending"])
        verdicts = [state["set"]["preferences"][cid] for cid in state["asked"]]
        self.assertEqual(verdicts, ["PREFER_SOL1", "PREFER_SOL2", "TIE"])

        # Resuming the session first repeats the pending comparison.
        result = self.ok("elicit", "--set", unanswered, "--max-questions", 6,
                         "--out", answered, "--session", session, stdin="1\n1\n1\n")
        self.assertIn("session finished: 6 answers", result.stdout)
        state = json.loads(session.read_text())
        self.assertEqual(len(set(state["asked"])), 6)
        self.assertEqual(len(json.loads(answered.read_text())["preferences"]), 6)


class ServeTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.schemas = Schemas(SOURCE / "schemas")
        cls.state = WORK / "serve_state"
        shutil.rmtree(cls.state, ignore_errors=True)
        cls.proc = subprocess.Popen([CLI, "serve", "--host", "127.0.0.1", "--port", "0", "--state-dir", cls.state],
                                    stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
        line = cls.proc.stdout.readline()
        if not line.startswith("listening on "):
            cls.proc.kill()
            raise RuntimeError(f"server did not start: {line!r} {cls.proc.stderr.read()}")
        cls.base = line.split()[-1]
        for _ in range(50):
            try:
                urllib.request.urlopen(cls.base + "/sessions/none", timeout=2)
            except urllib.error.HTTPError:
                break
            except OSError:
                time.sleep(0.1)

    @classmethod
    def tearDownClass(cls):
        cls.proc.terminate()
        cls.proc.wait(timeout=10)
        cls.proc.stdout.close()
        cls.proc.stderr.close()

    def call(self, method, path, body=None):
        data = None if body is None else json.dumps(body).encode()
        req = urllib.request.Request(self.base + path, data=data, method=method,
                                     headers={"Content-Type": "application/json"})
        try:
            with urllib.request.urlopen(req, timeout=120) as res:
                text = res.read().decode()
                return res.status, json.loads(text) if text else None, dict(res.headers)
        except urllib.error.HTTPError as e:
            text = e.read().decode()
            return e.code, json.loads(text) if text else None, dict(e.headers)

    def conforms(self, kind, value):
        self.assertEqual(self.schemas.errors(kind, value), [], kind)

    def test_session_round_trip(self):
        learning = json.loads((SOURCE / "data" / "building_fixture" / "learning_set.json").read_text())
        learning["preferences"] = {}
        request = {"set": learning, "max_questions": 12, "seed": 3}
        self.conforms("service-create-session", request)
        status, body, headers = self.call("POST", "/sessions", request)
        self.assertEqual(status, 201)
        self.assertEqual(headers.get("Access-Control-Allow-Origin"), "*")
        self.conforms("service-session-created", body)
        sid = body["session_id"]

        status, body, _ = self.call("POST", f"/sessions/{sid}/learn", {})
        self.assertEqual(status, 400)
        self.conforms("service-error", body)

        seen = []
        verdicts = ["PREFER_SOL1", "PREFER_SOL2", "TIE"]
        while True:
            status, view, _ = self.call("GET", f"/sessions/{sid}/next")
            if status == 204:
                break
            self.assertEqual(status, 200)
            self.conforms("service-comparison", view)
            self.assertNotIn(view["comparison_id"], seen)
            seen.append(view["comparison_id"])
            answer = {"verdict": verdicts[len(seen) % 3], "comparison_id": view["comparison_id"]}
            self.conforms("service-preference", answer)
            status, body, _ = self.call("POST", f"/sessions/{sid}/preference", answer)
            self.assertEqual(status, 200)
            self.conforms("service-progress", body)
            self.assertEqual(body["progress"]["answered"], len(seen))
        self.assertEqual(len(seen), 12)

        status, body, _ = self.call("POST", f"/sessions/{sid}/preference",
                                    {"verdict": "TIE", "comparison_id": seen[0]})
        self.assertEqual(status, 409)
        self.conforms("service-error", body)

        status, body, _ = self.call("GET", f"/sessions/{sid}")
        self.assertEqual(status, 200)
        self.conforms("service-status", body)
        self.assertTrue(body["finished"])

        status, exported, _ = self.call("GET", f"/sessions/{sid}/export")
        self.assertEqual(status, 200)
        self.conforms("session", exported)
        self.assertEqual(exported["asked"], seen)
        self.assertEqual(json.loads((self.state / f"{sid}.json").read_text()), exported)

        learn_config = {"val_error": 40, "seed": 5, "ga": {"generations": 60}}
        self.conforms("service-learn-request", learn_config)
        status, body, _ = self.call("POST", f"/sessions/{sid}/learn", learn_config)
        self.assertEqual(status, 200)
        self.conforms("service-learn", body)
        self.assertEqual(body["report"]["comparisons"], 12)

    def test_errors(self):
        status, body, _ = self.call("GET", "/sessions/nope/next")
        self.assertEqual(status, 404)
        self.conforms("service-error", body)
        req = urllib.request.Request(self.base + "/sessions", data=b"{not json", method="POST")
        with self.assertRaises(urllib.error.HTTPError) as caught:
            urllib.request.urlopen(req, timeout=10)
        self.assertEqual(caught.exception.code, 400)
        self.conforms("service-error", json.loads(caught.exception.read().decode()))
        caught.exception.close()
        status, body, _ = self.call("POST", "/sessions", {"max_questions": 3})
        self.assertEqual(status, 400)
        self.assertEqual(body["location"], "$")


if __name__ == "__main__":
    if len(sys.argv) < 4:
        sys.exit(__doc__)
    CLI = str(pathlib.Path(sys.argv[1]).resolve())
    SOURCE = pathlib.Path(sys.argv[2]).resolve()
    WORK = pathlib.Path(sys.argv[3]).resolve()
    unittest.main(argv=sys.argv[:1], verbosity=2)
