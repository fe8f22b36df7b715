import re

PATTERN = re.compile(r"\d+")


def first_number(text):
    found = PATTERN.search(text)
    return int(found.group()) if found else None
