import numpy as np
import pytest

from irs_mac.channel_model import ChannelRealization, ScenarioConfig


def scenario(m_total=2, seed=0, **kw):
    """Default-geometry scenario with an even element split."""
    m1 = m_total // 2
    return ScenarioConfig(m_total=m_total, m_split=(m1, m_total - m1),
                          rng_seed=seed, **kw)


def manual_realization(h_bar, h_dist, g_dist, h_cent, g_cent):
    """Realization from plain lists (complex-friendly)."""
    return ChannelRealization(
        h_bar=np.asarray(h_bar, dtype=np.complex128),
        h_dist=tuple(np.asarray(v, dtype=np.complex128) for v in h_dist),
        g_dist=tuple(np.asarray(v, dtype=np.complex128) for v in g_dist),
        h_cent=np.asarray(h_cent, dtype=np.complex128),
        g_cent=np.asarray(g_cent, dtype=np.complex128),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
