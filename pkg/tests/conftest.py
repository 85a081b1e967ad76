import pytest

from hzd_walker.gait import GaitConfig, lip_periodic_gait, vlip_periodic_gait

# four-digit periodic velocities of the T = 0.6 s LIP gait (z0 = 0.7)
REF_XDOT0 = 2.3147
REF_YDOT0 = -1.5136


@pytest.fixture(scope="session")
def lip_gait_06():
    return lip_periodic_gait(0.6, 0.7, 1.2)


@pytest.fixture(scope="session")
def lip_gait_07():
    return lip_periodic_gait(0.7, 0.7, 1.1)


@pytest.fixture(scope="session")
def vlip_gait():
    return vlip_periodic_gait(GaitConfig(C=1.1, T=0.7, z0=0.7, a=0.02))
