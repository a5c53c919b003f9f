"""
MAC DCF - EdcaSim

Máquina de estados de transmissão DCF por estação: espera de DIFS,
backoff uniforme com congelamento e retomada, crescimento exponencial do CW,
limite de retransmissões, post-backoff, ACK e RTS/CTS opcional com NAV.

A contagem regressiva não gera um evento por slot: cada contendor agenda
um único evento na fronteira de slot em que o contador chega a zero e,
quando o meio fica ocupado, desconta os slots ociosos já decorridos.
"""

import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Deque, List, Optional

import numpy as np

from src.core.erros import ErroEstado
from src.core.escalonador import Escalonador, Event, EventKind, Timestamp
from src.core.meio_fisico import ID_AP, FrameKind, MeioFisico, Transmission
from src.core.parametros import DcfParams, PhyParams
from src.core.trafego import Packet

logger = logging.getLogger(__name__)

# código do contendor DCF na semente (ACs EDCA usam 0..3)
CODIGO_DCF = 4


def rng_contendor(seed: int, station_id: int, codigo: int) -> np.random.Generator:
    return np.random.default_rng([seed, station_id, codigo])


def draw_backoff(cw: int, rng: np.random.Generator, inclusivo: bool = False) -> int:
    """
    Sorteia o backoff em slots: uniforme em [0, cw-1], ou em [0, cw]
    quando inclusivo.
    """
    if cw < 1:
        raise ValueError(f"cw deve ser >= 1 (atual: {cw})")
    return int(rng.integers(0, cw + 1 if inclusivo else cw))


def proximo_cw(cw: int, cw_max: int) -> int:
    """Próximo estágio da escada 2^k - 1, limitado a cw_max."""
    return min((cw + 1) * 2 - 1, cw_max)


class Fase(str, Enum):
    IDLE = "idle"
    DIFS_WAIT = "difs-wait"
    BACKOFF = "backoff"
    TRANSMITTING = "transmitting"
    AWAITING_ACK = "awaiting-ack"
    POST_BACKOFF = "post-backoff"


@dataclass(frozen=True)
class DcfState:
    """Retrato do estado de um contendor em um instante."""
    cw_min: int
    cw_max: int
    cw: int
    backoff_remaining: int
    retry_count: int
    retry_limit: int
    nav_until: Timestamp
    rts_cts_enabled: bool
    phase: Fase


# ============================================================================
# CONTENDOR
# ============================================================================

class Contendor:
    """
    Uma fila com sua própria disputa pelo meio: a estação DCF tem um,
    a estação EDCA tem quatro (uma por Access Category).

    Quem decide quando o canal está livre é a estação dona; o contendor
    só arma, congela e dispara a própria contagem.
    """

    codigo = CODIGO_DCF

    def __init__(
        self,
        nome: str,
        kernel: Escalonador,
        cw_min: int,
        cw_max: int,
        retry_limit: int,
        aifs_us: int,
        slot_us: int,
        rng: np.random.Generator,
        inclusivo: bool = False,
        queue_capacity: int = 1000,
        txop_limit_us: int = 0,
    ):
        self.nome = nome
        self.kernel = kernel
        self.cw_min = cw_min
        self.cw_max = cw_max
        self.cw = cw_min
        self.retry_limit = retry_limit
        self.retry_count = 0
        self.aifs_us = aifs_us
        self.slot_us = slot_us
        self.rng = rng
        self.inclusivo = inclusivo
        self.queue_capacity = queue_capacity
        self.txop_limit_us = txop_limit_us

        self.fila: Deque[Packet] = deque()
        self.backoff_remaining = 0
        self.contando = False
        self.evento: Optional[Event] = None
        self.origem: Timestamp = 0
        self.entrada: Timestamp = 0
        self._fase_troca: Optional[Fase] = None

        self.ao_expirar: Callable[["Contendor"], None] = lambda c: None
        self.ao_remover: Callable[[Packet, bool], None] = lambda p, entregue: None

        # contadores
        self.acessos = 0
        self.quadros_ok = 0
        self.falhas = 0
        self.retry_drops = 0
        self.queue_drops = 0
        self.colisoes_virtuais = 0
        self.maior_cw = cw_min
        # rajadas TXOP com mais de um quadro
        self.rajadas_multiplas = 0
        self.maior_rajada_us = 0

    # ------------------------------------------------------------------
    # Estado
    # ------------------------------------------------------------------

    @property
    def armado(self) -> bool:
        return self.evento is not None and self.evento.pendente

    @property
    def fase(self) -> Fase:
        if self._fase_troca is not None:
            return self._fase_troca
        if not self.contando:
            return Fase.IDLE
        if self.armado and self.kernel.now() < self.origem:
            return Fase.DIFS_WAIT
        return Fase.BACKOFF if self.fila else Fase.POST_BACKOFF

    def contador_em(self, t: Timestamp) -> int:
        """Valor do contador de backoff em t, contando as fronteiras já passadas."""
        if self.armado and t > self.origem:
            return max(0, self.backoff_remaining - (t - self.origem) // self.slot_us)
        return self.backoff_remaining

    def estado(self, nav_until: Timestamp = 0, rts_cts: bool = False) -> DcfState:
        return DcfState(
            cw_min=self.cw_min,
            cw_max=self.cw_max,
            cw=self.cw,
            backoff_remaining=self.contador_em(self.kernel.now()),
            retry_count=self.retry_count,
            retry_limit=self.retry_limit,
            nav_until=nav_until,
            rts_cts_enabled=rts_cts,
            phase=self.fase,
        )

    # ------------------------------------------------------------------
    # Fila
    # ------------------------------------------------------------------

    def enfileirar(self, pacote: Packet, canal_livre: bool) -> bool:
        """
        Coloca o pacote na fila. False se descartado por fila cheia.

        Um quadro que encontra o contendor ocioso com o canal livre espera
        só o AIFS/DIFS a partir da chegada; com o canal ocupado sorteia backoff.
        Com contagem em andamento (inclusive post-backoff) ele apenas entra na fila.
        """
        if len(self.fila) >= self.queue_capacity:
            self.queue_drops += 1
            return False
        self.fila.append(pacote)
        if not self.contando and self._fase_troca is None:
            self.contando = True
            self.entrada = self.kernel.now()
            self.backoff_remaining = 0 if canal_livre else self._sortear_valor()
        return True

    # ------------------------------------------------------------------
    # Contagem regressiva
    # ------------------------------------------------------------------

    def _sortear_valor(self) -> int:
        return draw_backoff(self.cw, self.rng, self.inclusivo)

    def _sortear(self) -> None:
        self.backoff_remaining = self._sortear_valor()
        self.contando = True

    def on_medium_idle(self, since: Timestamp) -> Optional[Event]:
        """
        Arma a contagem: AIFS/DIFS a partir do início do período ocioso
        (ou da entrada do contendor, se posterior) e um slot por unidade
        restante do contador.
        """
        if not self.contando or self._fase_troca is not None or self.armado:
            return None
        self.origem = max(since, self.entrada) + self.aifs_us
        disparo = self.origem + self.backoff_remaining * self.slot_us
        self.evento = self.kernel.agendar(disparo, EventKind.BACKOFF_SLOT, self.nome, self._expirou)
        return self.evento

    def on_medium_busy(self, t: Timestamp) -> None:
        """Congela o contador; um disparo marcado para o próprio t é mantido."""
        ev = self.evento
        if ev is None or not ev.pendente or ev.fire_at == t:
            return
        self.kernel.cancel(ev)
        self.evento = None
        if t > self.origem:
            self.backoff_remaining -= (t - self.origem) // self.slot_us

    def desarmar_no_disparo(self) -> None:
        """Cancela um evento que dispararia agora (tratado em conjunto por outro contendor)."""
        if self.evento is not None:
            self.kernel.cancel(self.evento)
            self.evento = None
        self.backoff_remaining = 0

    def _expirou(self) -> None:
        self.evento = None
        self.backoff_remaining = 0
        self.ao_expirar(self)

    def concluir_post_backoff(self) -> None:
        self.contando = False

    # ------------------------------------------------------------------
    # Troca de quadros
    # ------------------------------------------------------------------

    def marcar_transmitindo(self) -> None:
        self._fase_troca = Fase.TRANSMITTING

    def marcar_aguardando(self) -> None:
        self._fase_troca = Fase.AWAITING_ACK

    def on_tx_outcome(self, success: bool) -> None:
        """
        Resultado da troca. Sucesso: CW volta a cw_min, retira o quadro e
        sorteia o post-backoff. Falha: CW cresce, retry_count + 1, e acima
        do limite o quadro é descartado.

        Raises:
            ErroEstado: resultado entregue fora da fase awaiting-ack
        """
        if self._fase_troca is not Fase.AWAITING_ACK:
            raise ErroEstado(f"{self.nome}: resultado de transmissão na fase {self.fase.value}")
        self._fase_troca = None
        if success:
            pacote = self.fila.popleft()
            self.cw = self.cw_min
            self.retry_count = 0
            self.quadros_ok += 1
            self._sortear()
            self.ao_remover(pacote, True)
        else:
            self._falhar()

    def falha_virtual(self) -> None:
        """Colisão interna perdida: mesmo caminho de falha, sem tocar o meio."""
        self.colisoes_virtuais += 1
        self._falhar()

    def _atualizar_cw_falha(self) -> int:
        self.cw = proximo_cw(self.cw, self.cw_max)
        self._sortear()
        return self.cw

    def _falhar(self) -> None:
        self.falhas += 1
        self.retry_count += 1
        if self.retry_count > self.retry_limit:
            pacote = self.fila.popleft()
            self.cw = self.cw_min
            self.retry_count = 0
            self.retry_drops += 1
            # sorteio antes da notificação: uma reposição saturada encontra a contagem ativa
            self._sortear()
            self.ao_remover(pacote, False)
        else:
            self.maior_cw = max(self.maior_cw, self._atualizar_cw_falha())

    def __repr__(self) -> str:
        return f"Contendor({self.nome}, cw={self.cw}, fila={len(self.fila)}, fase={self.fase.value})"


# ============================================================================
# ESTAÇÃO
# ============================================================================

class EstacaoBase:
    """
    Estação associada ao AP: ouvinte do meio, dona dos contendores e
    da troca de quadros (RTS/CTS, dados, ACK, rajadas TXOP).

    O canal é visto como ocupado com o meio ocupado, com NAV ativo ou
    durante a própria troca (os SIFS entre quadros não liberam a disputa).
    """

    def __init__(
        self,
        station_id: int,
        kernel: Escalonador,
        meio: MeioFisico,
        rts_cts: bool = False,
    ):
        if station_id == ID_AP:
            raise ValueError(f"id {ID_AP} é reservado ao AP")
        self.station_id = station_id
        self.kernel = kernel
        self.meio = meio
        self.phy: PhyParams = meio.phy
        self.rts_cts = rts_cts
        self.contendores: List[Contendor] = []

        self.nav_until: Timestamp = 0
        self._nav_evento: Optional[Event] = None
        self.em_troca = False
        self._ativo: Optional[Contendor] = None
        self._aguardando: Optional[FrameKind] = None
        self._timeout: Optional[Event] = None
        self._rajada_inicio: Optional[Timestamp] = None
        self._rajada_fim: Timestamp = 0
        self._rajada_quadros = 0

        meio.registrar_ouvinte(self)

    def _registrar(self, contendor: Contendor) -> Contendor:
        contendor.ao_expirar = self.ao_expirar
        self.contendores.append(contendor)
        return contendor

    def definir_remocao(self, callback: Callable[[Packet, bool], None]) -> None:
        for c in self.contendores:
            c.ao_remover = callback

    # ------------------------------------------------------------------
    # Detecção de portadora
    # ------------------------------------------------------------------

    @property
    def canal_ocupado(self) -> bool:
        return self.meio.ocupado or self.kernel.now() < self.nav_until or self.em_troca

    def livre_desde(self) -> Timestamp:
        return max(self.meio.livre_desde, self.nav_until)

    def on_medium_busy(self, t: Timestamp) -> None:
        for c in self.contendores:
            c.on_medium_busy(t)

    def on_medium_idle(self, t: Timestamp) -> None:
        self._rearmar()

    def _rearmar(self) -> None:
        if self.canal_ocupado:
            return
        since = self.livre_desde()
        for c in self.contendores:
            c.on_medium_idle(since)

    def atualizar_nav(self, ate: Timestamp) -> None:
        """NAV a partir de um RTS/CTS ouvido de terceiros."""
        if ate <= self.nav_until:
            return
        self.nav_until = ate
        agora = self.kernel.now()
        for c in self.contendores:
            c.on_medium_busy(agora)
        self.kernel.cancel(self._nav_evento)
        self._nav_evento = self.kernel.agendar(
            ate, EventKind.NAV_END, f"sta{self.station_id}", self._rearmar
        )

    # ------------------------------------------------------------------
    # Fila
    # ------------------------------------------------------------------

    def contendor_para(self, pacote: Packet) -> Contendor:
        return self.contendores[0]

    def enfileirar(self, pacote: Packet) -> bool:
        contendor = self.contendor_para(pacote)
        livre = not self.canal_ocupado
        if not contendor.enfileirar(pacote, livre):
            return False
        if livre:
            contendor.on_medium_idle(self.livre_desde())
        return True

    def pacotes_em_fila(self) -> List[Packet]:
        return [p for c in self.contendores for p in c.fila]

    # ------------------------------------------------------------------
    # Acesso ao meio
    # ------------------------------------------------------------------

    def ao_expirar(self, contendor: Contendor) -> None:
        self._acesso(contendor)

    def _acesso(self, contendor: Contendor) -> None:
        if not contendor.fila:
            contendor.concluir_post_backoff()
            return
        if self.em_troca:
            # expira durante a própria troca: aguarda o fim dela
            contendor.entrada = self.kernel.now()
            return
        self._iniciar_troca(contendor)

    def _iniciar_troca(self, contendor: Contendor) -> None:
        self.em_troca = True
        self._ativo = contendor
        contendor.acessos += 1
        contendor.marcar_transmitindo()
        if self.rts_cts:
            self.rts_cts_exchange(contendor)
        else:
            self._enviar_dados()

    def _duracao_troca(self, pacote: Packet) -> int:
        """Duration anunciado no RTS: SIFS+CTS+SIFS+dados+SIFS+ACK."""
        sifs = self.phy.sifs_us
        return (
            sifs + self.meio.frame_airtime(FrameKind.CTS, 0)
            + sifs + self.meio.frame_airtime(FrameKind.DATA, pacote.size_bytes)
            + sifs + self.meio.frame_airtime(FrameKind.ACK, 0)
        )

    def rts_cts_exchange(self, contendor: Contendor) -> Transmission:
        """Envia o RTS do quadro à frente da fila; o CTS libera os dados após SIFS."""
        pacote = contendor.fila[0]
        agora = self.kernel.now()
        tx = self.meio.begin_transmission(
            self.station_id, FrameKind.RTS, 0, agora,
            destino=ID_AP, duracao_nav_us=self._duracao_troca(pacote),
        )
        self._aguardar(FrameKind.CTS, tx.end + self.phy.sifs_us
                       + self.meio.frame_airtime(FrameKind.CTS, 0) + self.phy.slot_time_us)
        return tx

    def _enviar_dados(self) -> Transmission:
        contendor = self._ativo
        pacote = contendor.fila[0]
        agora = self.kernel.now()
        contendor.marcar_transmitindo()
        tx = self.meio.begin_transmission(
            self.station_id, FrameKind.DATA, pacote.size_bytes, agora,
            destino=ID_AP, pacote=pacote,
        )
        if self._rajada_inicio is None:
            self._rajada_inicio = agora
        fim_ack = tx.end + self.phy.sifs_us + self.meio.frame_airtime(FrameKind.ACK, 0)
        self._rajada_quadros += 1
        self._rajada_fim = fim_ack
        self._aguardar(FrameKind.ACK, fim_ack + self.phy.slot_time_us)
        return tx

    def _aguardar(self, kind: FrameKind, limite: Timestamp) -> None:
        self._aguardando = kind
        self._timeout = self.kernel.agendar(
            limite, EventKind.ACK_TIMEOUT, f"sta{self.station_id}", self._expirou_resposta
        )

    # ------------------------------------------------------------------
    # Recepção
    # ------------------------------------------------------------------

    def fim_transmissao_propria(self, tx: Transmission) -> None:
        if self._ativo is not None and tx.frame_kind in (FrameKind.DATA, FrameKind.RTS):
            self._ativo.marcar_aguardando()

    def receber(self, tx: Transmission) -> None:
        if tx.corrupted or tx.destino != self.station_id or self._aguardando is not tx.frame_kind:
            return
        self.kernel.cancel(self._timeout)
        self._timeout = None
        self._aguardando = None
        if tx.frame_kind is FrameKind.CTS:
            self.kernel.agendar(
                self.kernel.now() + self.phy.sifs_us, EventKind.TX_START,
                f"sta{self.station_id}", self._enviar_dados,
            )
        else:
            self._sucesso()

    def _sucesso(self) -> None:
        contendor = self._ativo
        contendor.on_tx_outcome(True)
        if self._continua_rajada(contendor):
            contendor.marcar_transmitindo()
            self.kernel.agendar(
                self.kernel.now() + self.phy.sifs_us, EventKind.TX_START,
                f"sta{self.station_id}", self._enviar_dados,
            )
        else:
            self._encerrar_troca()

    def _continua_rajada(self, contendor: Contendor) -> bool:
        return False

    def _expirou_resposta(self) -> None:
        self._timeout = None
        self._aguardando = None
        self._ativo.on_tx_outcome(False)
        self._encerrar_troca()

    def _encerrar_troca(self) -> None:
        agora = self.kernel.now()
        ativo = self._ativo
        if ativo is not None and self._rajada_quadros > 1:
            # do início do primeiro DATA ao fim previsto do último ACK
            ativo.rajadas_multiplas += 1
            ativo.maior_rajada_us = max(ativo.maior_rajada_us, self._rajada_fim - self._rajada_inicio)
        self.em_troca = False
        self._ativo = None
        self._rajada_inicio = None
        self._rajada_quadros = 0
        for c in self.contendores:
            c.entrada = agora
        self._rearmar()

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.station_id})"


class EstacaoDcf(EstacaoBase):
    """Estação legada: um único contendor com DIFS e faixa [0, CW-1] por padrão."""

    def __init__(
        self,
        station_id: int,
        kernel: Escalonador,
        meio: MeioFisico,
        dcf: DcfParams,
        seed: int,
        rts_cts: bool = False,
        inclusivo: bool = False,
    ):
        super().__init__(station_id, kernel, meio, rts_cts)
        self.dcf = dcf
        self._registrar(Contendor(
            nome=f"sta{station_id}",
            kernel=kernel,
            cw_min=dcf.cw_min,
            cw_max=dcf.cw_max,
            retry_limit=dcf.retry_limit,
            aifs_us=meio.phy.difs_us,
            slot_us=meio.phy.slot_time_us,
            rng=rng_contendor(seed, station_id, CODIGO_DCF),
            inclusivo=inclusivo,
            queue_capacity=dcf.queue_capacity,
        ))

    @property
    def contendor(self) -> Contendor:
        return self.contendores[0]

    def estado(self) -> DcfState:
        return self.contendor.estado(self.nav_until, self.rts_cts)


__all__ = [
    'CODIGO_DCF',
    'rng_contendor',
    'draw_backoff',
    'proximo_cw',
    'Fase',
    'DcfState',
    'Contendor',
    'EstacaoBase',
    'EstacaoDcf',
]
