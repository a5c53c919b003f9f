"""
Fixtures compartilhadas dos testes do EdcaSim.

Os parâmetros de PHY são fixados aqui (802.11g, 54/24 Mb/s) para que os
valores esperados não dependam de config/config.yaml.
"""

import sys
from pathlib import Path

import pytest

RAIZ = Path(__file__).parent.parent.resolve()
if str(RAIZ) not in sys.path:
    sys.path.insert(0, str(RAIZ))

from src.core.escalonador import Escalonador  # noqa: E402
from src.core.parametros import AcParams, DcfParams, EdcaParamSet, PhyParams  # noqa: E402
from src.core.trafego import Packet, TrafficClass  # noqa: E402


PHY_PADRAO = PhyParams(
    slot_time_us=9,
    sifs_us=10,
    difs_us=28,
    data_rate_bps=54_000_000,
    ctrl_rate_bps=24_000_000,
    plcp_overhead_us=20,
    mac_header_bytes=28,
    ack_frame_bytes=14,
    rts_frame_bytes=20,
    cts_frame_bytes=14,
)

DCF_PADRAO = DcfParams(cw_min=15, cw_max=1023, retry_limit=7, queue_capacity=1000)

EDCA_PADRAO = EdcaParamSet(
    vo=AcParams(7, 15, 2),
    vi=AcParams(15, 31, 2),
    be=AcParams(31, 1023, 7),
    bk=AcParams(31, 1023, 9),
)

# bloco YAML com os mesmos valores, para cenários escritos nos testes
YAML_PARAMETROS = """\
phy:
  slot_time_us: 9
  sifs_us: 10
  difs_us: 28
  data_rate_bps: 54000000
  ctrl_rate_bps: 24000000
  plcp_overhead_us: 20
  mac_header_bytes: 28
  ack_frame_bytes: 14
  rts_frame_bytes: 20
  cts_frame_bytes: 14
dcf:
  cw_min: 15
  cw_max: 1023
  retry_limit: 7
edca_params:
  VO: {cwmin: 7, cwmax: 15, aifsn: 2}
  VI: {cwmin: 15, cwmax: 31, aifsn: 2}
  BE: {cwmin: 31, cwmax: 1023, aifsn: 7}
  BK: {cwmin: 31, cwmax: 1023, aifsn: 9}
"""


@pytest.fixture
def kernel():
    return Escalonador()


@pytest.fixture
def phy():
    return PHY_PADRAO


@pytest.fixture
def novo_pacote():
    """Fábrica de pacotes: novo_pacote(seq=0, size=1500, t=0, classe=...)."""

    def fabrica(seq=0, size=1500, t=0, classe=TrafficClass.BEST_EFFORT, flow_id='f1'):
        return Packet(flow_id=flow_id, seq=seq, size_bytes=size, created_at=t, traffic_class=classe)

    return fabrica


@pytest.fixture
def pastas_temporarias(tmp_path, monkeypatch):
    """Redireciona Resultado/ e logs/ para tmp_path."""
    from src.core.paths import ProjectPaths

    monkeypatch.setattr(ProjectPaths, 'RESULTADO', tmp_path / 'Resultado')
    monkeypatch.setattr(ProjectPaths, 'LOGS', tmp_path / 'logs')
    return tmp_path
