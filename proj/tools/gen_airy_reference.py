#!/usr/bin/env python3
"""Arbitrary-precision Airy reference table for the specfun tests.

Usage: gen_airy_reference.py [out.csv]
"""
import sys
import mpmath as mp

mp.mp.dps = 40


def points():
    pts = []
    for x in [-30, -25, -20, -15, -12, -10, -9, -8.5, -7, -5.5, -4, -3, -2.338107410459767,
              -2, -1.5, -1, -0.5, 0, 0.25, 0.5, 1, 1.5, 2, 3, 4, 5.5, 7, 8.5, 9, 10, 12, 15, 20, 25, 30]:
        pts.append(complex(x, 0))
    for r in [0.7, 1.6, 3.0, 5.0, 8.9, 9.1, 14.0, 22.0, 29.0]:
        for th in [0.1, 0.9, 1.6, 2.2, 3.0]:
            pts.append(complex(mp.mpf(r) * mp.cos(th), mp.mpf(r) * mp.sin(th)))
    for z in [complex(-6, 0.5), complex(4, -0.3), complex(-12, -1), complex(2, 2), complex(-1, -3)]:
        pts.append(z)
    return pts


def main():
    out = open(sys.argv[1], "w") if len(sys.argv) > 1 else sys.stdout
    out.write("re,im,ai_re,ai_im,aip_re,aip_im,bi_re,bi_im,bip_re,bip_im\n")
    for z in points():
        zz = mp.mpc(z.real, z.imag)
        vals = [mp.airyai(zz), mp.airyai(zz, 1), mp.airybi(zz), mp.airybi(zz, 1)]
        row = [mp.nstr(mp.mpf(z.real), 20), mp.nstr(mp.mpf(z.imag), 20)]
        for v in vals:
            v = mp.mpc(v)
            row += [mp.nstr(v.real, 20), mp.nstr(v.imag, 20)]
        out.write(",".join(row) + "\n")


if __name__ == "__main__":
    main()
