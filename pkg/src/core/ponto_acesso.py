"""
Ponto de Acesso - EdcaSim

Receptor puro do uplink: registra a entrega de cada quadro de dados íntegro,
responde com ACK (e CTS a um RTS) após SIFS e descarta duplicatas
de retransmissões cujo ACK se perdeu.
"""

import logging
from typing import Dict

from src.core.escalonador import Escalonador, EventKind
from src.core.meio_fisico import ID_AP, FrameKind, MeioFisico, Transmission
from src.validacao.metricas import ColetorMetricas

logger = logging.getLogger(__name__)


class PontoAcesso:

    station_id = ID_AP

    def __init__(self, kernel: Escalonador, meio: MeioFisico, coletor: ColetorMetricas):
        self.kernel = kernel
        self.meio = meio
        self.coletor = coletor
        # último seq recebido por fluxo; cada fluxo chega em ordem (fila FIFO na estação)
        self._ultimo_seq: Dict[str, int] = {}
        self.duplicatas = 0
        self.respostas_perdidas = 0

    def receber(self, tx: Transmission) -> None:
        if tx.corrupted:
            return
        agora = self.kernel.now()
        if tx.frame_kind is FrameKind.DATA:
            pacote = tx.pacote
            if self._ultimo_seq.get(pacote.flow_id, -1) >= pacote.seq:
                self.duplicatas += 1
            else:
                self._ultimo_seq[pacote.flow_id] = pacote.seq
                pacote.delivered_at = agora
                self.coletor.record_delivery(pacote, agora)
            self._responder(FrameKind.ACK, tx.sender, 0)
        elif tx.frame_kind is FrameKind.RTS:
            restante = tx.duracao_nav_us - self.meio.phy.sifs_us - self.meio.frame_airtime(FrameKind.CTS, 0)
            self._responder(FrameKind.CTS, tx.sender, max(0, restante))

    def _responder(self, kind: FrameKind, destino: int, nav_us: int) -> None:
        def enviar():
            if self.meio.transmitindo(ID_AP):
                self.respostas_perdidas += 1
                logger.warning("AP ocupado em t=%d; %s para sta%d não enviado", self.kernel.now(), kind.value, destino)
                return
            self.meio.begin_transmission(
                ID_AP, kind, 0, self.kernel.now(), destino=destino, duracao_nav_us=nav_us
            )

        self.kernel.agendar(self.kernel.now() + self.meio.phy.sifs_us, EventKind.TX_START, "ap", enviar)


__all__ = ['PontoAcesso']
