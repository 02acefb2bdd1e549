import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, SCHEMAS = sys.argv[1], sys.argv[2]
failures = []


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as f:
        return json.load(f)


def run(args, expect=0, env=None, cwd=None):
    p = subprocess.run([CLI] + args, capture_output=True, text=True, env=env, cwd=cwd)
    if p.returncode != expect:
        failures.append(f"{args}: exit {p.returncode}, expected {expect}\n{p.stderr}")
    return p


def validated(name, args, **kw):
    p = run(args, **kw)
    try:
        out = json.loads(p.stdout)
        jsonschema.validate(out, schema(name))
        return out
    except Exception as e:
        failures.append(f"{args}: {str(e).splitlines()[0]}")
        return {}


tmp = tempfile.mkdtemp()
part = validated("partition", ["partition", "--L", "2", "--M", "2", "--t1", "0.41421356", "--t2", "0.41421356", "--tau", "p"])
orc = validated("oracle", ["oracle", "--L", "2", "--M", "2", "--t1", "0.41421356", "--t2", "0.41421356", "--tau", "p",
                           "--lambda", "0", "--sites", "l:0,l:1;l:1,u:0"])
if part and orc and abs(part["log_Z"] - orc["log_Z"]) > 1e-10:
    failures.append("partition and oracle disagree")
validated("oracle", ["oracle", "--L", "3", "--M", "4", "--lambda", "0.1", "--mode", "transfer"])
validated("correlate", ["correlate", "--L", "4", "--M", "3", "--sites", "l:3,l:1,u:0,u:2", "--verify"])
sites = os.path.join(tmp, "sites.csv")
with open(sites, "w") as f:
    f.write("l:3,l:1\n# comment\nl:0,u:2\n")
batch = validated("correlate", ["correlate", "--L", "4", "--M", "3", "--sites-file", sites])
if batch and len(batch["results"]) != 2:
    failures.append("batch correlate row count")
validated("propagator", ["propagator", "--kind", "edge", "--h", "-1", "--z", "1,2", "--zp", "0,1"])
prop = os.path.join(tmp, "prop.csv")
with open(prop, "w") as f:
    f.write("kind,h,eta,z1,z2,zp1,zp2\nmassive,0,0,2,0,0,0\nle,-2,0,0,1,0,1\n")
validated("propagator", ["propagator", "--batch", prop])
z = validated("zspin", ["zspin", "--grid-n", "2048"])
if z and abs(z["Zspin1_reduced"] - 0.131788) > 1e-6:
    failures.append("Zspin1 from the reduced integrals")
csv = os.path.join(tmp, "fit.csv")
fit = validated("scaling-fit", ["scaling-fit", "--Lmax", "32", "--seps", "2:8", "--csv", csv, "--r2-min", "0.9"])
if fit and not os.path.exists(os.path.join(tmp, "fit.gp")):
    failures.append("gnuplot script missing")
validated("universality", ["universality", "--lambda", "0.05"])
validated("check", ["check", "orientation", "--L", "3", "--M", "2"])
validated("check", ["check", "partition", "--draws", "1"])

# determinism across worker budgets and seeds recorded
a = run(["partition", "--L", "5", "--M", "4"]).stdout
b = run(["--threads", "4", "partition", "--L", "5", "--M", "4"], env=dict(os.environ, ISING_THREADS="2")).stdout
if a != b:
    failures.append("output depends on the worker budget")

# argument errors exit 2, computation errors exit 1 with an error object
run(["partition", "--L", "1"], expect=2)
run(["nope"], expect=2)
run(["scaling-fit", "--Lmax", "16", "--seps", "8:32"], expect=2)
cfg = os.path.join(tmp, "cfg.json")
with open(cfg, "w") as f:
    json.dump({"partition": {"L": 3, "unknown": 1}}, f)
run(["--config", cfg, "partition"], expect=2)
with open(cfg, "w") as f:
    json.dump({"seed": 7, "partition": {"L": 3, "M": 2}}, f)
c = validated("partition", ["--config", cfg, "partition", "--M", "3"])
if c and (c["provenance"]["parameters"]["L"] != 3 or c["provenance"]["parameters"]["M"] != 3 or c["provenance"]["seed"] != 7):
    failures.append("config merge")
err = run(["correlate", "--L", "4", "--M", "3", "--sites", "l:9,l:1"], expect=1)
try:
    jsonschema.validate(json.loads(err.stdout), schema("error"))
except Exception as e:
    failures.append(f"error object: {str(e).splitlines()[0]}")

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
