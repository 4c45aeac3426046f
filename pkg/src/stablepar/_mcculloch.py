"""Frozen quantile lookup tables for the stability-index and scale
estimator.  Generated by scripts/gen_quantile_tables.py; edit that
script, not this file."""

import numpy as np

ALPHA_GRID = np.array([
    0.6000000000,
    0.6500000000,
    0.7000000000,
    0.7500000000,
    0.8000000000,
    0.8500000000,
    0.9000000000,
    0.9500000000,
    1.0000000000,
    1.0500000000,
    1.1000000000,
    1.1500000000,
    1.2000000000,
    1.2500000000,
    1.3000000000,
    1.3500000000,
    1.4000000000,
    1.4500000000,
    1.5000000000,
    1.5500000000,
    1.6000000000,
    1.6500000000,
    1.7000000000,
    1.7500000000,
    1.8000000000,
    1.8500000000,
    1.9000000000,
    1.9500000000,
    2.0000000000,
])

# nu(alpha) = (q95 - q05) / (q75 - q25) of the standard law
NU_TABLE = np.array([
    23.6121892334,
    18.4396165805,
    14.8937669576,
    12.3575223380,
    10.4790833727,
    9.0470161257,
    7.9284924506,
    7.0368658864,
    6.3137515147,
    5.7186757130,
    5.2228688951,
    4.8054232426,
    4.4508505934,
    4.1474938981,
    3.8864699466,
    3.6609460641,
    3.4656247169,
    3.2963518471,
    3.1497950848,
    3.0231704636,
    2.9140291632,
    2.8201275218,
    2.7393822320,
    2.6698816207,
    2.6099137227,
    2.5579845613,
    2.5128182855,
    2.4733422529,
    2.4386636364,
])

# c(alpha) = (q75 - q25) / sigma of the standard law
C_TABLE = np.array([
    2.3242079273,
    2.2432997089,
    2.1801284401,
    2.1304010156,
    2.0910694707,
    2.0598924903,
    2.0351668151,
    2.0155590527,
    2.0000000000,
    1.9876191597,
    1.9777046631,
    1.9696777911,
    1.9630744008,
    1.9575287366,
    1.9527578807,
    1.9485468296,
    1.9447348064,
    1.9412033431,
    1.9378663634,
    1.9346622183,
    1.9315474544,
    1.9284920334,
    1.9254757150,
    1.9224853489,
    1.9195128628,
    1.9165537772,
    1.9136061151,
    1.9106696054,
    1.9077451048,
])
