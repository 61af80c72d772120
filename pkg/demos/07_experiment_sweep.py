"""Declarative experiments: a JSON file in, an aggregated report out.

Runs the bundled SNR sweep config through the Monte-Carlo harness and
prints the CSV report. The command line gets you the same thing:

    physec run demos/configs/snr_sweep.json --format csv

and the JSON twin (physec run ... --format json) carries the config, its
hash and per-sweep-point error tallies for archival.
"""
import os

from physec.harness import load_config, report_csv_text, run_experiment

config_path = os.path.join(os.path.dirname(__file__), "configs", "snr_sweep.json")
config = load_config(config_path)

print(f"scenario      {config.scenario}")
print(f"sweep         {config.sweep_parameter} over {config.sweep_values}")
print(f"trials        {config.trials} per sweep value")
print(f"config hash   {config.config_hash[:16]}...")
print()

report = run_experiment(config, jobs=os.cpu_count() or 1)
print(report_csv_text(report), end="")

print()
print("same seed, same bytes: rerun this script and diff the output")
