import sys
import os
sys.path.append(os.getcwd())

from loguru import logger

from combinatorics.superperm_ops import Superpermutation, superperm_to_tour
from instances.builder import build_atsp
from solver.tour import write_tsplib_tour

FIXTURES = os.path.join("data", "fixtures")
SUPERPERM_FILE = os.path.join(FIXTURES, "superperm-6-866.txt")
TOUR_FILE = os.path.join(FIXTURES, "6.866.tour")


def regenerate():
    with open(SUPERPERM_FILE, "r", encoding="ascii") as f:
        sp = Superpermutation(text=f.read(), n=6)
    logger.info(f"Loaded {sp.length}-character superpermutation from {SUPERPERM_FILE}")

    report = sp.report()
    if not report.valid:
        logger.error(f"Fixture is not a superpermutation: {report.summary()}")
        return False

    inst = build_atsp(6)
    tour = superperm_to_tour(sp, inst)
    with open(TOUR_FILE, "w", encoding="ascii", newline="\n") as f:
        write_tsplib_tour(
            tour, f, name="superperm-6-866.tour",
            comment=f"first-appearance order of the {sp.length}-character superpermutation",
        )
    logger.success(f"Wrote {TOUR_FILE} (weight {tour.weight})")
    return True


if __name__ == "__main__":
    sys.exit(0 if regenerate() else 1)
