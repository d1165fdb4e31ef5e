#!/usr/bin/env python3
"""Extract four-part Bach chorales from a music21 wheel as plain MusicXML.

Usage:
    pip download music21==9.9.2 --no-deps -d /tmp/m21
    extract_music21_bach.py /tmp/m21/music21-9.9.2-py3-none-any.whl tests/data/bach \
        --count 40 --grader build/tools/chorale-grader
"""

import argparse
import io
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET
import zipfile
from pathlib import Path

PREFIX = "music21/corpus/bach/"


def inner_musicxml(mxl_bytes):
    with zipfile.ZipFile(io.BytesIO(mxl_bytes)) as mxl:
        for name in mxl.namelist():
            if name.startswith("META-INF"):
                continue
            if name.endswith((".xml", ".musicxml")):
                return mxl.read(name)
    return None


def part_count(xml_bytes):
    root = ET.fromstring(xml_bytes)
    return len(root.findall("part"))


def ingests(grader, xml_bytes):
    with tempfile.TemporaryDirectory() as tmp:
        src = Path(tmp) / "in.xml"
        src.write_bytes(xml_bytes)
        res = subprocess.run([grader, "convert", str(src), "-o", str(Path(tmp) / "out.json")],
                             capture_output=True)
        return res.returncode == 0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("source", help="music21 wheel (.whl) or site-packages zip")
    ap.add_argument("out_dir")
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--grader", help="chorale-grader binary; files it cannot convert are skipped")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    with zipfile.ZipFile(args.source) as whl:
        names = sorted(n for n in whl.namelist() if n.startswith(PREFIX) and n.endswith(".mxl"))
        for name in names:
            if written >= args.count:
                break
            xml = inner_musicxml(whl.read(name))
            if xml is None or part_count(xml) != 4:
                continue
            if args.grader and not ingests(args.grader, xml):
                print(f"skip {name}", file=sys.stderr)
                continue
            stem = Path(name).stem
            (out / f"{stem}.xml").write_bytes(xml)
            written += 1
    print(f"wrote {written} chorales to {out}")
    return 0 if written == args.count else 1


if __name__ == "__main__":
    sys.exit(main())
