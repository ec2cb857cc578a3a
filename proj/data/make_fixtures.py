#!/usr/bin/env python3
# Copyright 2026 The spotgame Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the small synthetic data set under data/fixture and the example
run configurations under data/configs. Output is fully determined by SEED."""

import csv
import datetime as dt
import json
import math
import pathlib
import random

SEED = 20200106
ROOT = pathlib.Path(__file__).resolve().parent
FIX = ROOT / "fixture"
CFG = ROOT / "configs"

ZONES = ["north", "central", "south"]
START = dt.datetime(2020, 1, 6)
HOURS = 48

# name, zone, type, installed MW, k_source override ("" = type default)
PLAYERS = [
    ("nuclear_n", "north", "nuclear", 6000, ""),
    ("lignite_n", "north", "lignite", 4000, "coal_usd_per_ton"),
    ("gas_n", "north", "gas", 4000, ""),
    ("wind_n", "north", "wind_onshore", 5000, ""),
    ("ror_n", "north", "hydro_ror", 1500, ""),
    ("nuclear_c", "central", "nuclear", 3000, ""),
    ("gas_c", "central", "gas", 6500, ""),
    ("coal_c", "central", "hard_coal", 3000, ""),
    ("solar_c", "central", "solar", 4000, ""),
    ("wind_c", "central", "wind_offshore", 2500, ""),
    ("pumped_c", "central", "hydro_pumped", 1500, ""),
    ("gas_s", "south", "gas", 5500, ""),
    ("coal_s", "south", "hard_coal", 2000, ""),
    ("solar_s", "south", "solar", 5000, ""),
    ("reservoir_s", "south", "hydro_reservoir", 3000, ""),
    ("nuclear_s", "south", "nuclear", 2000, ""),
]

# n_theta, f_theta and constant k of the built-in type table.
TYPES = {
    "nuclear": (0.8, 0.5, 13.8),
    "lignite": (0.4, 0.5, None),
    "hard_coal": (0.4, 0.5, None),
    "gas": (0.2, 0.5, None),
    "wind_onshore": (0.05, 0.5, 0.5),
    "wind_offshore": (0.05, 0.5, 0.5),
    "solar": (0.05, 0.5, 0.5),
    "hydro_ror": (0.1, 0.5, 8.45),
    "hydro_pumped": (0.2, 0.5, None),
    "hydro_reservoir": (0.2, 0.5, None),
}
SERIES = {"lignite": "coal", "hard_coal": "coal", "gas": "gas",
          "hydro_pumped": "hydro_storage", "hydro_reservoir": "hydro_storage"}

BASE_DEMAND = {"north": 11000.0, "central": 12500.0, "south": 9500.0}


def hour_text(t):
    return (START + dt.timedelta(hours=t)).strftime("%Y-%m-%dT%H:00")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def fmt(x):
    return f"{x:.3f}"


def main():
    rng = random.Random(SEED)
    FIX.mkdir(exist_ok=True)
    CFG.mkdir(exist_ok=True)

    write_csv(FIX / "players.csv",
              ["player", "zone", "type", "n_theta", "f_theta", "k_source", "capacity"],
              [[n, z, t, "", "", k, q] for n, z, t, q, k in PLAYERS])

    demand = []
    for t in range(HOURS):
        h = t % 24
        shape = 0.85 + 0.2 * math.sin(math.pi * (h - 6) / 12) if 6 <= h <= 22 else 0.8
        demand.append({z: BASE_DEMAND[z] * shape * rng.uniform(0.97, 1.03) for z in ZONES})
    write_csv(FIX / "demand.csv", ["hour"] + ZONES,
              [[hour_text(t)] + [fmt(demand[t][z]) for z in ZONES] for t in range(HOURS)])

    days = sorted({(START + dt.timedelta(hours=t)).date() for t in range(HOURS)})
    fuel = {d: {"gas": rng.uniform(28, 34), "coal_usd_per_ton": rng.uniform(52, 60),
                "hydro_storage": rng.uniform(36, 42)} for d in days}
    write_csv(FIX / "fuel.csv", ["date", "gas", "coal_usd_per_ton", "hydro_storage"],
              [[d.isoformat()] + [fmt(fuel[d][k]) for k in ("gas", "coal_usd_per_ton", "hydro_storage")]
               for d in days])

    variable = [p for p in PLAYERS if p[2] in ("wind_onshore", "wind_offshore", "solar")]
    avail = []
    for t in range(HOURS):
        h = t % 24
        row = {}
        for n, _, typ, q, _ in variable:
            if typ == "solar":
                sun = max(0.0, math.sin(math.pi * (h - 7) / 11)) if 7 <= h <= 18 else 0.0
                row[n] = q * sun * rng.uniform(0.7, 1.0)
            else:
                row[n] = q * rng.uniform(0.15, 0.75)
        avail.append(row)
    write_csv(FIX / "capacity.csv", ["hour"] + [p[0] for p in variable],
              [[hour_text(t)] + [fmt(avail[t][p[0]]) for p in variable] for t in range(HOURS)])

    # Triangle of equal lines, south as reference: flow = PTDF (y - d).
    lines = [("north-central", [1 / 3, -1 / 3, 0.0]),
             ("central-south", [1 / 3, 2 / 3, 0.0]),
             ("north-south", [2 / 3, 1 / 3, 0.0])]
    net_rows = []
    for t in range(HOURS):
        for name, ptdf in lines:
            ram = rng.uniform(900, 1800)
            net_rows.append([hour_text(t), name] + [f"{v:.6f}" for v in ptdf] + [fmt(-ram), fmt(ram)])
    write_csv(FIX / "network.csv", ["hour", "line"] + ZONES + ["r", "R"], net_rows)

    # Observed prices: zonal merit order under true costs with a markup and
    # noise. One cell is left empty as a missing observation.
    targets = []
    for t in range(HOURS):
        day = (START + dt.timedelta(hours=t)).date()
        row = {}
        for z in ZONES:
            units = []
            for n, zone, typ, q, _ in PLAYERS:
                if zone != z:
                    continue
                nt, ft, kc = TYPES[typ]
                if kc is None:
                    s = SERIES[typ]
                    k = fuel[day]["coal_usd_per_ton"] * 0.89 * 11 / 20 if s == "coal" else fuel[day][s]
                else:
                    k = kc
                cap = avail[t].get(n, q)
                size = cap if cap > 0 else q
                b = k * (1 - nt * ft / (1 - ft))
                c = max(1e-6, nt * k / ((1 - ft) * size))
                units.append((c, b, cap))
            lo, hi = 0.0, 500.0
            for _ in range(100):
                v = 0.5 * (lo + hi)
                supply = sum(min(cap, max(0.0, (v - b) / c)) for c, b, cap in units)
                lo, hi = (v, hi) if supply < demand[t][z] else (lo, v)
            row[z] = 0.5 * (lo + hi) * rng.uniform(1.15, 1.35)
        targets.append(row)
    rows = [[hour_text(t)] + [fmt(targets[t][z]) for z in ZONES] for t in range(HOURS)]
    rows[17][2] = ""
    write_csv(FIX / "targets.csv", ["hour"] + ZONES, rows)

    # Detection triple over two weeks and two zones. Errors are target - model.
    dz = ["north", "south"]
    n = 14 * 24
    tb_rows, gt_rows, obs_rows = [], [], []
    for t in range(n):
        h = t % 24
        tb, gt, obs = [], [], []
        for zi, _ in enumerate(dz):
            base = 42 + 12 * math.sin(2 * math.pi * (h - 8) / 24) + 3 * zi
            p = base + rng.gauss(0, 2.5)
            m_tb = p + rng.gauss(1.0, 3.0)
            m_gt = p + rng.gauss(0.0, 2.0)
            if h in (18, 19) and t // 24 in (2, 5, 9, 12):
                p = m_gt = base + 25.0          # strategic evening peaks
                m_tb = base + rng.gauss(0, 1)
            if h == 3 and t // 24 in (6, 13):
                p = -8.0                         # renewable glut
            tb.append(fmt(m_tb))
            gt.append(fmt(m_gt))
            obs.append(fmt(p))
        start = dt.datetime(2020, 3, 2) + dt.timedelta(hours=t)
        stamp = start.strftime("%Y-%m-%dT%H:00")
        tb_rows.append([stamp] + tb)
        gt_rows.append([stamp] + gt)
        obs_rows.append([stamp] + obs)
    write_csv(FIX / "detect_tb.csv", ["hour"] + dz, tb_rows)
    write_csv(FIX / "detect_gt.csv", ["hour"] + dz, gt_rows)
    write_csv(FIX / "detect_target.csv", ["hour"] + dz, obs_rows)

    data = {"players": "../fixture/players.csv", "demand": "../fixture/demand.csv",
            "fuel": "../fixture/fuel.csv", "capacity": "../fixture/capacity.csv",
            "network": "../fixture/network.csv"}
    configs = {
        "clear.json": {"mode": "clear", "data": data},
        "nash.json": {"mode": "nash", "data": data,
                      "nash": {"n_pts": 11, "max_cycles": 100, "schedule": "jacobi",
                               "presolve": {"n_pts": 5, "max_cycles": 50}}},
        "synthetic_fig4.json": {"mode": "synthetic", "seed": 7,
                                "synthetic": {"figure": 4, "samples": 10000}},
        "synthetic_fig5.json": {"mode": "synthetic",
                                "synthetic": {"figure": 5}},
        "synthetic_fig6.json": {"mode": "synthetic",
                                "synthetic": {"figure": 6}},
        "calibrate.json": {"mode": "calibrate", "data": data,
                           "calibrate": {"targets": "../fixture/targets.csv"}},
        "detect.json": {"mode": "detect",
                        "detect": {"tb": "../fixture/detect_tb.csv",
                                   "gt": "../fixture/detect_gt.csv",
                                   "target": "../fixture/detect_target.csv",
                                   "confidence": 0.975}},
    }
    for name, body in configs.items():
        with open(CFG / name, "w") as f:
            json.dump(body, f, indent=2)
            f.write("\n")


if __name__ == "__main__":
    main()
