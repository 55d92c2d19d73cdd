#!/usr/bin/env python3
"""Writes the bundled cabinet scene (data/cabinet_scene.json).

Layout, world frame with the table top at z = 0:
  both arms on a pedestal along x = 0, receiving arm at y = -0.2 and
  suction arm at y = +0.2; board stack beside the suction arm; cabinet
  on the table at y = -0.52 with its width along x; human standing in
  front of the cabinet facing +y.
"""
import json
import math
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "cabinet_scene.json")

# Robot grip force per finger [N], calibrated so the medium board's
# transverse relaxation limit is 62 degrees under the default pads.
GRIP_FORCE = 3776.2106451090112

LARGE = dict(length=0.390, width=0.288, thickness=0.010, mass=0.8)
MEDIUM = dict(length=0.587, width=0.295, thickness=0.010, mass=1.8)
SMALL = dict(length=0.397, width=0.280, thickness=0.003, mass=0.22)

S2 = math.sqrt(0.5)
Q_ID = [1.0, 0.0, 0.0, 0.0]
# Horizontal panels, board y -> world -y.
Q_FLAT = [0.0, 0.0, 0.0, 1.0]
# Side panels: board x -> world z, board y -> world -y, board z -> world x.
Q_SIDE = [0.0, S2, 0.0, S2]

# Cabinet footprint: width along x, depth along y, open towards the human.
CAB = (0.25, -0.52)
W = MEDIUM["length"]
D = MEDIUM["width"]
GAP = 0.001
BASE_Z = 0.30  # arms mounted on a pedestal
ROBOT_Y = 0.0  # pedestal center line


def pose(p, q=Q_ID):
    return {"position": [round(v, 6) for v in p], "quaternion": q}


def box(c, h):
    return {"pose": pose(c), "half": list(h)}


def main():
    cx, cy = CAB
    t_m, t_l, t_s = MEDIUM["thickness"], LARGE["thickness"], SMALL["thickness"]
    side_x = W / 2 + t_l / 2 + GAP
    targets = {
        "base": pose((cx, cy, t_m / 2 + GAP), Q_FLAT),
        "lateral-right": pose((cx - side_x, cy, LARGE["length"] / 2 + GAP), Q_SIDE),
        "half-shelf-lower": pose((cx, cy, 0.10), Q_FLAT),
        "lateral-left": pose((cx + side_x, cy, LARGE["length"] / 2 + GAP), Q_SIDE),
        "shelf": pose((cx, cy, 0.20), Q_FLAT),
        "top": pose((cx, cy, LARGE["length"] + t_m / 2 + 2 * GAP), Q_FLAT),
        "half-shelf-upper": pose((cx, cy, 0.30), Q_FLAT),
    }
    kinds = {"base": MEDIUM, "lateral-right": LARGE, "half-shelf-lower": SMALL, "lateral-left": LARGE,
             "shelf": MEDIUM, "half-shelf-upper": SMALL, "top": MEDIUM}
    sequence = ["base", "lateral-right", "half-shelf-lower", "lateral-left", "shelf", "half-shelf-upper", "top"]

    # Stack with the first board on top.
    stack_xy = (0.30, ROBOT_Y + 0.42)
    boards = []
    z = 0.0
    for bid in reversed(sequence):
        k = kinds[bid]
        z += k["thickness"] / 2
        initial = pose((stack_xy[0], stack_xy[1], z))
        z += k["thickness"] / 2
        boards.append(dict(id=bid, **k, initial=initial, target=targets[bid]))
    boards.reverse()

    rr_positions = [[x, y, zz] for x in (0.30, 0.40) for y in (ROBOT_Y - 0.10, ROBOT_Y, ROBOT_Y + 0.10) for zz in (0.25, 0.35)]
    scene = {
        "robot": {
            "receiving": {"chain": "ur3.json", "name": "ur3-receiving", "base": pose((0.0, ROBOT_Y - 0.20, BASE_Z)),
                          "home": [0.0, -1.2, 1.6, -2.0, -1.5708, 0.0]},
            "suction": {"chain": "ur3.json", "name": "ur3-suction", "base": pose((0.0, ROBOT_Y + 0.20, BASE_Z)),
                        "home": [1.5708, -1.9, 2.2, -1.9, -1.5708, 0.0]},
        },
        "gripper": {"max_opening": 0.085, "ee_length": 0.20, "grip_force": GRIP_FORCE,
                    "pad": {"mu": 0.8, "h": 0.002, "K": 5.0e5, "r1": 0.015, "r2": 0.05}},
        "human": {
            "body": "human.json",
            "stance": pose((0.25, -0.92, 0.40), [S2, 0.0, 0.0, S2]),
            "pad": {"mu": 0.8, "h": 0.005, "K": 1.0, "r1": 0.01, "r2": 0.05},
            "grip_force": 25.0,
            "max_opening": 0.12,
            "grasp_spacing": 0.05,
        },
        "tool": {"length": 0.15, "radius": 0.015, "initial": pose((-0.15, ROBOT_Y + 0.45, 0.0)),
                 "yaw_samples": ["0 deg", "90 deg", "180 deg", "270 deg"]},
        "boards": boards,
        "sequence": sequence,
        "workspace": [box((0.35, -0.15, -0.026), (0.65, 0.95, 0.025)),
                      box((-0.02, ROBOT_Y, BASE_Z / 2), (0.09, 0.32, BASE_Z / 2 - 0.001))],
        "finished": [],
        "rr_grid": {"positions": rr_positions, "yaws": ["0 deg", "45 deg", "90 deg", "135 deg"],
                    "workspace_center": [0.35, ROBOT_Y, 0.35]},
        "config": {"seed": 7, "budget_s": 30.0, "comfort_threshold": 0.15, "goal_samples": 800,
                   "grasp_spacing": 0.05, "w_rot": 0.1, "joint_speed": 0.5,
                   "max_transfer_attempts": 12, "attempt_budget_s": 5.0},
    }
    out = sys.argv[1] if len(sys.argv) > 1 else OUT
    with open(out, "w") as f:
        json.dump(scene, f, indent=2)
        f.write("\n")


if __name__ == "__main__":
    main()
