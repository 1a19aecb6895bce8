"""Exit 0 iff every argument is a well-formed XML document with an <svg> root."""
import sys
import xml.etree.ElementTree as ET

for path in sys.argv[1:]:
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        sys.exit(f"{path}: {exc}")
    if not root.tag.endswith("svg"):
        sys.exit(f"{path}: root element is {root.tag}, expected svg")
    print(f"{path}: ok ({sum(1 for _ in root.iter())} elements)")
