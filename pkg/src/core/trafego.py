"""
Geração de Tráfego - EdcaSim

Fluxos CBR (taxa constante, chegadas determinísticas com defasagem inicial
sorteada) e fluxos saturados (fila sempre com pelo menos um quadro).
"""

import zlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.core.escalonador import Timestamp, US_POR_SEGUNDO
from src.core.parametros import AcId


class TrafficClass(str, Enum):
    VOICE = "voice"
    VIDEO = "video"
    BEST_EFFORT = "best-effort"
    BACKGROUND = "background"

    @classmethod
    def de_rotulo(cls, rotulo: str) -> "TrafficClass":
        try:
            return cls(str(rotulo).lower())
        except ValueError:
            validos = ", ".join(c.value for c in cls)
            raise ValueError(f"classe de tráfego desconhecida: '{rotulo}' (válidas: {validos})") from None


MODOS = ('cbr', 'saturated')

_CLASSE_PARA_AC = {
    TrafficClass.VOICE: AcId.VO,
    TrafficClass.VIDEO: AcId.VI,
    TrafficClass.BEST_EFFORT: AcId.BE,
    TrafficClass.BACKGROUND: AcId.BK,
}


@dataclass(frozen=True)
class FlowSpec:
    flow_id: str
    station: int
    traffic_class: TrafficClass
    mode: str
    packet_size_bytes: int
    rate_bps: Optional[int] = None
    start_at: Timestamp = 0
    stop_at: Optional[Timestamp] = None  # None = até o fim da simulação

    def ativo_em(self, t: Timestamp) -> bool:
        return t >= self.start_at and (self.stop_at is None or t < self.stop_at)


@dataclass
class Packet:
    flow_id: str
    seq: int
    size_bytes: int
    created_at: Timestamp
    traffic_class: TrafficClass = TrafficClass.BEST_EFFORT
    delivered_at: Optional[Timestamp] = None

    @property
    def chave(self):
        return (self.flow_id, self.seq)


def classify(packet: Packet) -> AcId:
    """Mapeia a classe de tráfego do pacote na Access Category."""
    return _CLASSE_PARA_AC[TrafficClass(packet.traffic_class)]


def rng_fluxo(seed: int, flow_id: str) -> np.random.Generator:
    """Fluxo aleatório próprio do fluxo, independente do das estações."""
    return np.random.default_rng([seed, 1_000_000 + zlib.crc32(flow_id.encode('utf-8'))])


class FonteCBR:
    """
    Chegadas t_k = base + floor(k * 8 * tamanho * 10^6 / taxa).

    O resto da divisão não se acumula: a k-ésima chegada é calculada
    diretamente a partir de k, então a taxa média é exata.
    """

    def __init__(self, flow: FlowSpec, rng: Optional[np.random.Generator] = None):
        if flow.mode != 'cbr':
            raise ValueError(f"Fluxo {flow.flow_id} não é CBR")
        if not flow.rate_bps or flow.rate_bps <= 0 or flow.packet_size_bytes <= 0:
            raise ValueError(f"Fluxo {flow.flow_id}: rate_bps e packet_size_bytes devem ser > 0")
        self.flow = flow
        self._num = 8 * flow.packet_size_bytes * US_POR_SEGUNDO
        self._taxa = flow.rate_bps
        offset = 0
        intervalo = self._num // self._taxa
        if rng is not None and intervalo > 0:
            offset = int(rng.integers(0, intervalo))
        self.offset = offset
        self.base = flow.start_at + offset

    @property
    def intervalo_us(self) -> float:
        return self._num / self._taxa

    def instante(self, k: int) -> Timestamp:
        return self.base + (k * self._num) // self._taxa

    def primeira_chegada(self) -> Optional[Timestamp]:
        return self.next_arrival(self.base - 1)

    def next_arrival(self, now: Timestamp) -> Optional[Timestamp]:
        """Menor instante de chegada estritamente posterior a now (None após stop_at)."""
        d = now - self.base
        k = max(0, -(-(d + 1) * self._taxa // self._num))
        t = self.instante(k)
        if self.flow.stop_at is not None and t >= self.flow.stop_at:
            return None
        return t


__all__ = [
    'TrafficClass',
    'MODOS',
    'FlowSpec',
    'Packet',
    'classify',
    'rng_fluxo',
    'FonteCBR',
]
