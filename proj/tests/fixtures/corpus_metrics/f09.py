def join_nonempty(parts, sep=", "):
    kept = [p for p in parts if p]
    return sep.join(kept)


TITLE = join_nonempty(["a", "", "b"])
