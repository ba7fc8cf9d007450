"""End-to-end pipeline: declare a sweep in TOML, run it through the harness,
and render figures from the emitted CSV with the companion plots package.

Run: python3 demos/05_sweep_and_figures.py
"""

import json
import pathlib
import subprocess
import sys
import tempfile

CONFIG = """
[distribution]
kind = "construction"
side = "+"

[noise]
family = "construction"

[hypothesis]
kind = "finite_sign"

[loss]
kind = "zero_one"

[sweep]
n = [50, 200, 800]
rho = [0.1, 0.3]
seeds = [1, 2, 3, 4, 5]
delta = 0.05
"""

out_dir = pathlib.Path(tempfile.mkdtemp(prefix="ilnlab-demo-"))
config = out_dir / "sweep.toml"
config.write_text(CONFIG)
csv_path = out_dir / "sweep.csv"

run = [sys.executable, "-m", "ilnlab.cli"]
subprocess.run(run + ["sweep", "--config", str(config), "--out",
                      str(csv_path), "--redact-timing"], check=True)
print(f"sweep CSV: {csv_path}")

report_path = out_dir / "construction.json"
with open(report_path, "w") as fh:
    subprocess.run(run + ["minimax", "--rho", "0.4"], check=True, stdout=fh)
report = json.loads(report_path.read_text())
print(f"construction report: {report_path} "
      f"(kl={report['kl']}, tv={report['tv']})")

try:
    from ilnlab_plots import render
except ImportError:
    print("ilnlab-plots is not installed; skipping figures "
          "(pip install -e plots)")
    sys.exit(0)

for source, kind in ((csv_path, "gap_vs_n"), (csv_path, "bounds_overlay"),
                     (report_path, "construction")):
    image = out_dir / f"{kind}.png"
    render(str(source), kind, str(image))
    print(f"figure: {image}")
