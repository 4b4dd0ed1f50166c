"""Turn a dataclass config into command line flags."""
import argparse
import dataclasses


def parse_config(cls, description):
    ap = argparse.ArgumentParser(description=description)
    for f in dataclasses.fields(cls):
        default = f.default if f.default is not dataclasses.MISSING else f.default_factory()
        flag = "--" + f.name.replace("_", "-")
        if isinstance(default, bool):
            ap.add_argument(flag, action=argparse.BooleanOptionalAction, default=default)
        elif isinstance(default, (list, tuple)):
            kind = type(default[0]) if default else str
            ap.add_argument(flag, nargs="+", type=kind, default=list(default))
        else:
            ap.add_argument(flag, type=type(default), default=default)
    return cls(**vars(ap.parse_args()))
