"""Holographic stabilizer codes on {4,n} tilings and their erasure decoding."""
