"""Archived-style product texts and a randomized product generator."""

import random

TWO = """ZCZC MIATWOAT ALL
TTAA00 KNHC 041200
TWOAT

Tropical Weather Outlook
NWS National Hurricane Center Miami FL
800 AM EDT Thu Jul 4 2024

For the North Atlantic...Caribbean Sea and the Gulf of Mexico:

1. Western Caribbean Sea:
Showers and thunderstorms continue near a tropical wave. Some slow
development is possible over the next few days as it moves west at
10 to 15 mph.
* Formation chance through 48 hours...low...10 percent.
* Formation chance through 7 days...low...20 percent.

$$
Forecaster Smith
NNNN
"""

ZFP = """FPUS54 KMFL 041930
ZFPMFL

Zone Forecast Product
National Weather Service Miami FL
330 PM EDT Thu Jul 4 2024

FLZ069-070-050800-
Metro Miami-Dade-
330 PM EDT Thu Jul 4 2024

.TONIGHT...Partly cloudy. Lows in the upper 70s. Southeast winds
5 to 10 mph.
.FRIDAY...Mostly sunny. A 30 percent chance of thunderstorms in the
afternoon. Highs around 91. Heat index values up to 105.
THURSDAY NIGHT...Partly cloudy. Lows in the upper 40s.

$$
"""

TCP = """WTNT32 KNHC 041500
TCPAT2

BULLETIN
Hurricane Beryl Advisory Number 30
NWS National Hurricane Center Miami FL AL022024
1100 AM EDT Thu Jul 04 2024

...BERYL MOVING WESTWARD OVER THE CARIBBEAN SEA...
...HURRICANE WATCH ISSUED FOR PORTIONS OF THE YUCATAN PENINSULA...

SUMMARY OF 1100 AM EDT...1500 UTC...INFORMATION
----------------------------------------------
LOCATION...17.2N 75.8W
MAXIMUM SUSTAINED WINDS...140 MPH...220 KM/H

DISCUSSION AND OUTLOOK
----------------------
At 1100 AM EDT (1500 UTC), the eye of Hurricane Beryl was located
near latitude 17.2 North, longitude 75.8 West. Beryl is moving toward
the west near 20 mph (31 km/h)! Is further weakening expected? Yes.
For more information see www.hurricanes.gov/graphics_at2.shtml?start.

$$
Forecaster Brown
"""

ARCHIVED = {"TWO": TWO, "ZFP": ZFP, "TCP": TCP}

HEADER_POOL = [
    "ZCZC MIATWOAT ALL",
    "TTAA00 KNHC {ddhhmm}",
    "FPUS54 KMFL {ddhhmm}",
    "TWOAT",
    "ZFPMFL",
    "TCPAT{n}",
    "{hhmm} AM EDT Thu Jul {d} 2024",
    "{hhmm} PM CDT Mon Sep {d} 2024",
    "NWS National Hurricane Center Miami FL",
    "National Weather Service San Juan PR",
    "FLZ0{nn}-0{nn}-{ddhhmm}-",
    "BULLETIN",
]
WORDS = (
    "showers thunderstorms tropical wave development possible moving west winds mph "
    "heavy rain flooding coastal storm surge warning watch advisory partly cloudy lows "
    "highs upper lower mid chance percent tonight tomorrow through days hurricane "
    "Caribbean Sea Gulf Mexico Puerto Rico Beryl North Atlantic"
).split()
TERMINALS = [".", ".", ".", "!", "?", "...", ""]
SEPARATORS = [" ", " ", "  ", "\n", "\t", " \n"]
FOOTERS = ["$$", "&&", "NNNN", "Forecaster Smith", "$$ ", ""]


def _fill(rng, line):
    return line.format(
        ddhhmm=f"{rng.randint(1, 28):02d}{rng.randint(0, 23):02d}{rng.randint(0, 59):02d}",
        hhmm=rng.choice(["800", "1100", "200", "1030"]),
        d=rng.randint(1, 28),
        n=rng.randint(1, 5),
        nn=f"{rng.randint(10, 99)}",
    )


def _sentence(rng):
    words = [rng.choice(WORDS) for _ in range(rng.randint(1, 12))]
    if rng.random() < 0.3:
        words.insert(rng.randrange(len(words) + 1), str(rng.randint(0, 150)))
    if rng.random() < 0.2:
        words.insert(rng.randrange(len(words) + 1), "...".join(rng.choice(WORDS).upper() for _ in range(2)))
    text = " ".join(words)
    text = text[0].upper() + text[1:]
    if rng.random() < 0.1:
        text = f"{rng.randint(1, 9)}. {text}"
    return text + rng.choice(TERMINALS)


def random_product(rng: random.Random) -> str:
    nl = "\r\n" if rng.random() < 0.1 else "\n"
    lines = [_fill(rng, rng.choice(HEADER_POOL)) for _ in range(rng.randint(0, 6))]
    if rng.random() < 0.7:
        lines.append("")
    for _ in range(rng.randint(1, 4)):
        para = "".join(_sentence(rng) + rng.choice(SEPARATORS) for _ in range(rng.randint(1, 5)))
        lines.append(para.rstrip("\n") if rng.random() < 0.8 else para)
        lines.append("" if rng.random() < 0.8 else rng.choice(FOOTERS))
    lines += [rng.choice(FOOTERS) for _ in range(rng.randint(0, 2))]
    text = nl.join(lines)
    return text + (nl if rng.random() < 0.8 else "")
