"""
Meio Físico Compartilhado - EdcaSim

Canal half-duplex único: tempo de ar dos quadros, detecção de portadora
e semântica de colisão (toda sobreposição corrompe todos os envolvidos,
sem captura, sem atraso de propagação, sem erro de canal).
Intervalos de ocupação são semiabertos [início, fim).
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, List, Optional, Protocol, Set

from src.core.erros import ErroEstado
from src.core.escalonador import Escalonador, EventKind, Timestamp
from src.core.parametros import PhyParams

logger = logging.getLogger(__name__)

ID_AP = 0


class FrameKind(str, Enum):
    DATA = "data"
    ACK = "ack"
    RTS = "rts"
    CTS = "cts"


def frame_airtime(frame_kind: FrameKind, payload_bytes: int, phy: Optional[PhyParams] = None) -> int:
    """
    Tempo de ar em µs inteiros, arredondado para cima:
    plcp + ceil(8 * (cabeçalho_do_tipo + payload) / taxa_do_tipo)

    Dados usam mac_header_bytes e data_rate_bps; quadros de controle
    usam o próprio tamanho e ctrl_rate_bps.
    """
    if payload_bytes < 0:
        raise ValueError(f"payload_bytes deve ser >= 0 (atual: {payload_bytes})")
    phy = phy or PhyParams()
    kind = FrameKind(frame_kind)
    if kind is FrameKind.DATA:
        cabecalho, taxa = phy.mac_header_bytes, phy.data_rate_bps
    elif kind is FrameKind.ACK:
        cabecalho, taxa = phy.ack_frame_bytes, phy.ctrl_rate_bps
    elif kind is FrameKind.RTS:
        cabecalho, taxa = phy.rts_frame_bytes, phy.ctrl_rate_bps
    else:
        cabecalho, taxa = phy.cts_frame_bytes, phy.ctrl_rate_bps
    bits_x_us = 8 * (cabecalho + payload_bytes) * 1_000_000
    return phy.plcp_overhead_us + -(-bits_x_us // taxa)


@dataclass(eq=False)
class Transmission:
    sender: int
    frame_kind: FrameKind
    payload_bytes: int
    start: Timestamp
    airtime_us: int
    corrupted: bool = False
    destino: Optional[int] = None
    duracao_nav_us: int = 0  # campo Duration de RTS/CTS
    pacote: object = None

    @property
    def end(self) -> Timestamp:
        return self.start + self.airtime_us


class OuvinteMeio(Protocol):
    def on_medium_busy(self, t: Timestamp) -> None: ...
    def on_medium_idle(self, t: Timestamp) -> None: ...


class MeioFisico:
    """
    Canal compartilhado por todas as estações e o AP (todos se ouvem).

    Ouvintes recebem as bordas livre→ocupado e ocupado→livre na ordem
    de registro. Ao fim de cada quadro, o callback de entrega é chamado
    depois de atualizar livre_desde e antes da borda de livre.
    """

    def __init__(self, kernel: Escalonador, phy: PhyParams):
        self.kernel = kernel
        self.phy = phy
        self._ativas: List[Transmission] = []
        self._transmitindo: Set[int] = set()
        self._ouvintes: List[OuvinteMeio] = []
        self._entregar: Optional[Callable[[Transmission], None]] = None
        self._ocupado_desde: Timestamp = 0
        self._livre_desde: Timestamp = 0
        self._airtime_cache: Dict[FrameKind, Dict[int, int]] = {k: {} for k in FrameKind}
        # estatísticas do canal
        self.tempo_ocupado_us = 0
        self.airtime_total_us = 0
        self.quadros = 0
        self.quadros_corrompidos = 0
        self.rodadas_contencao = 0
        self.rodadas_colisao = 0
        self._iniciados_no_periodo = 0

    # ------------------------------------------------------------------
    # Registro
    # ------------------------------------------------------------------

    def registrar_ouvinte(self, ouvinte: OuvinteMeio) -> None:
        self._ouvintes.append(ouvinte)

    def definir_entrega(self, callback: Callable[[Transmission], None]) -> None:
        self._entregar = callback

    # ------------------------------------------------------------------
    # Consultas
    # ------------------------------------------------------------------

    def frame_airtime(self, frame_kind: FrameKind, payload_bytes: int) -> int:
        cache = self._airtime_cache[frame_kind]
        valor = cache.get(payload_bytes)
        if valor is None:
            valor = cache[payload_bytes] = frame_airtime(frame_kind, payload_bytes, self.phy)
        return valor

    @property
    def ocupado(self) -> bool:
        return bool(self._ativas)

    @property
    def livre_desde(self) -> Timestamp:
        """Fim do último período ocupado (0 se nunca houve transmissão)."""
        return self._livre_desde

    def medium_idle_since(self, t: Timestamp) -> bool:
        """True se nenhuma transmissão ocupou o meio em [t, now]."""
        agora = self.kernel.now()
        if t > agora:
            raise ValueError(f"t={t} posterior a now={agora}")
        if self._ativas:
            return False
        return t >= self._livre_desde

    def transmitindo(self, estacao: int) -> bool:
        return estacao in self._transmitindo

    # ------------------------------------------------------------------
    # Transmissão
    # ------------------------------------------------------------------

    def begin_transmission(
        self,
        sender: int,
        frame_kind: FrameKind,
        payload_bytes: int,
        start: Timestamp,
        destino: Optional[int] = None,
        duracao_nav_us: int = 0,
        pacote: object = None,
    ) -> Transmission:
        """
        Coloca um quadro no ar a partir de start (== now).

        Raises:
            ErroEstado: remetente já transmitindo ou start fora do relógio
        """
        agora = self.kernel.now()
        if start != agora:
            raise ErroEstado(f"Transmissão deve começar em now={agora} (start={start})")
        if sender in self._transmitindo:
            raise ErroEstado(f"Estação {sender} já está transmitindo")

        tx = Transmission(
            sender=sender,
            frame_kind=frame_kind,
            payload_bytes=payload_bytes,
            start=start,
            airtime_us=self.frame_airtime(frame_kind, payload_bytes),
            destino=destino,
            duracao_nav_us=duracao_nav_us,
            pacote=pacote,
        )
        if self._ativas:
            tx.corrupted = True
            for outra in self._ativas:
                outra.corrupted = True

        estava_livre = not self._ativas
        self._ativas.append(tx)
        self._transmitindo.add(sender)
        self.quadros += 1
        self.airtime_total_us += tx.airtime_us
        if frame_kind in (FrameKind.DATA, FrameKind.RTS):
            self._iniciados_no_periodo += 1

        self.kernel.agendar(tx.end, EventKind.TX_END, f"tx{sender}", lambda: self._fim(tx))

        if estava_livre:
            self._ocupado_desde = agora
            for ouvinte in self._ouvintes:
                ouvinte.on_medium_busy(agora)
        return tx

    def _fim(self, tx: Transmission) -> None:
        agora = self.kernel.now()
        self._ativas.remove(tx)
        self._transmitindo.discard(tx.sender)
        if tx.corrupted:
            self.quadros_corrompidos += 1

        ficou_livre = not self._ativas
        if ficou_livre:
            self._livre_desde = agora
            self.tempo_ocupado_us += agora - self._ocupado_desde
            if self._iniciados_no_periodo >= 1:
                self.rodadas_contencao += 1
                if self._iniciados_no_periodo >= 2:
                    self.rodadas_colisao += 1
            self._iniciados_no_periodo = 0

        if self._entregar is not None:
            self._entregar(tx)

        if ficou_livre and not self._ativas:
            for ouvinte in self._ouvintes:
                ouvinte.on_medium_idle(agora)

    # ------------------------------------------------------------------
    # Estatísticas
    # ------------------------------------------------------------------

    def utilizacao(self, duracao_us: int) -> float:
        """Fração do tempo com o meio ocupado (sobreposições fundidas)."""
        ocupado = self.tempo_ocupado_us
        if self._ativas:
            ocupado += self.kernel.now() - self._ocupado_desde
        return ocupado / duracao_us if duracao_us > 0 else 0.0

    def probabilidade_colisao(self) -> Optional[float]:
        if self.rodadas_contencao == 0:
            return None
        return self.rodadas_colisao / self.rodadas_contencao


__all__ = [
    'ID_AP',
    'FrameKind',
    'frame_airtime',
    'Transmission',
    'MeioFisico',
]
