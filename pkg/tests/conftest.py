import pytest

from twostep_bss import SourceKind, SourceSpec, generate_sources


@pytest.fixture(scope='session')
def band_pair():
    """Whitened low band + high band noise; disjoint spectra, true rotation 0"""
    return generate_sources((SourceSpec(SourceKind.BAND_NOISE, (0.05, 0.3), seed=11),
                             SourceSpec(SourceKind.BAND_NOISE, (1.0, 2.0), seed=12)),
                            16384)


@pytest.fixture(scope='session')
def sparse_pair():
    """Whitened AR(1) pair driven by sparse innovations, true rotation ~0"""
    return generate_sources((SourceSpec(SourceKind.AR1, (0.9, 'sparse'), seed=21),
                             SourceSpec(SourceKind.AR1, (0.2, 'sparse'), seed=22)),
                            16384)
