"""Atomic units (hbar = m_e = e = 1) and the few laboratory conversions we need."""

HBAR = 1.0
ELECTRON_MASS = 1.0
PROTON_MASS = 1836.0

BOHR_NM = 0.052917721  # 1 a.u. of length in nm
AU_TIME_S = 2.4188843e-17  # 1 a.u. of time in s


def nm_to_au(x):
    return x / BOHR_NM


def au_to_nm(x):
    return x * BOHR_NM


def pm_to_au(x):
    return x * 1e-3 / BOHR_NM


def um_to_au(x):
    return x * 1e3 / BOHR_NM


def cm_to_au(x):
    return x * 1e7 / BOHR_NM


def au_to_seconds(t):
    return t * AU_TIME_S
