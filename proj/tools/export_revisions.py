#!/usr/bin/env python3
"""Export the .sol changes of a git history as a revision manifest for `evlint diff`.

Each non-merge commit in the range becomes one revision whose pairs hold the
parent and commit versions of every changed .sol file:

    tools/export_revisions.py --repo path/to/repo --range v1.0..main --out revs/
    evlint diff --manifest revs/manifest.json
"""

import argparse
import json
import pathlib
import subprocess
import sys


def git(repo, *args):
    return subprocess.run(["git", "-C", repo, *args], check=True, capture_output=True).stdout


def changed_files(repo, commit):
    out = git(repo, "diff-tree", "--no-commit-id", "-r", "-M", "--name-status", f"{commit}^", commit)
    for line in out.decode().splitlines():
        fields = line.split("\t")
        status = fields[0][0]
        if status == "R":
            yield "D", fields[1], fields[1]
            yield "A", fields[2], fields[2]
        else:
            yield status, fields[1], fields[1]


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--repo", default=".")
    parser.add_argument("--range", required=True, help="git revision range, e.g. main~50..main")
    parser.add_argument("--out", required=True, help="output directory for the manifest and file versions")
    args = parser.parse_args()

    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    commits = git(args.repo, "rev-list", "--reverse", "--no-merges", args.range).decode().split()
    revisions = []
    for commit in commits:
        pairs = []
        for status, path, _ in changed_files(args.repo, commit):
            if not path.endswith(".sol"):
                continue
            pair = {"path": path}
            for side, rev, present in (("beforeFile", f"{commit}^", status != "A"),
                                       ("afterFile", commit, status != "D")):
                if not present:
                    continue
                rel = pathlib.Path(commit[:12]) / ("before" if side == "beforeFile" else "after") / path
                (out / rel).parent.mkdir(parents=True, exist_ok=True)
                (out / rel).write_bytes(git(args.repo, "show", f"{rev}:{path}"))
                pair[side] = rel.as_posix()
            pairs.append(pair)
        if pairs:
            message = git(args.repo, "log", "-1", "--format=%s", commit).decode().strip()
            revisions.append({"id": commit[:12], "message": message, "pairs": pairs})

    with open(out / "manifest.json", "w") as f:
        json.dump({"revisions": revisions}, f, indent=2)
        f.write("\n")
    print(f"{len(revisions)} revisions written to {out / 'manifest.json'}", file=sys.stderr)


if __name__ == "__main__":
    main()
