"""
Escalonador de Eventos em Tempo Virtual - EdcaSim

Núcleo determinístico da simulação: relógio inteiro em µs, fila de
prioridade ordenada por (fire_at, seq) e cancelamento explícito por handle.
Uma instância por simulação; nada é compartilhado entre instâncias.
"""

import heapq
import logging
from enum import Enum
from typing import Callable, List, Optional, TextIO, Tuple

from src.core.erros import ErroEscalonamento

logger = logging.getLogger(__name__)

# Timestamp: µs de tempo virtual (int não negativo)
Timestamp = int

US_POR_SEGUNDO = 1_000_000


def segundos_para_us(segundos: float) -> Timestamp:
    """Converte segundos (config) em µs inteiros, arredondando ao µs."""
    return int(round(float(segundos) * US_POR_SEGUNDO))


class EventKind(str, Enum):
    ARRIVAL = "arrival"
    BACKOFF_SLOT = "backoff-slot-boundary"
    TX_START = "tx-start"
    TX_END = "tx-end"
    ACK_TIMEOUT = "ack-timeout"
    NAV_END = "nav-end"
    SCENARIO_CHANGE = "scenario-change"


class Event:
    """
    Evento agendado. O próprio objeto serve de handle para cancel().

    seq é atribuído por schedule(); antes disso vale -1.
    """

    __slots__ = ('fire_at', 'seq', 'target', 'kind', 'acao', 'cancelado', 'disparado')

    def __init__(
        self,
        fire_at: Timestamp,
        kind: EventKind,
        target: str,
        acao: Optional[Callable[[], None]] = None,
    ):
        self.fire_at = fire_at
        self.seq = -1
        self.target = target
        self.kind = kind
        self.acao = acao
        self.cancelado = False
        self.disparado = False

    @property
    def pendente(self) -> bool:
        return self.seq >= 0 and not self.cancelado and not self.disparado

    def __repr__(self) -> str:
        return f"Event(t={self.fire_at}, seq={self.seq}, {self.target}, {self.kind.value})"


class Escalonador:
    """
    Fila de eventos em tempo virtual.

    Eventos cancelados permanecem no heap marcados e são descartados
    ao chegar ao topo; cancel() os remove logicamente na hora.
    """

    def __init__(self, trace: Optional[TextIO] = None):
        self._agora: Timestamp = 0
        self._proximo_seq = 0
        self._heap: List[Tuple[int, int, Event]] = []
        self._pendentes = 0
        self._trace = trace
        self.total_disparados = 0

    def now(self) -> Timestamp:
        return self._agora

    @property
    def pendentes(self) -> int:
        return self._pendentes

    def schedule(self, event: Event) -> Event:
        """
        Enfileira o evento e devolve o handle usado em cancel().

        Raises:
            ErroEscalonamento: fire_at anterior ao relógio ou evento reutilizado
        """
        if event.fire_at < self._agora:
            raise ErroEscalonamento(
                f"Evento no passado: fire_at={event.fire_at} < now={self._agora} ({event.target}, {event.kind.value})"
            )
        if event.seq >= 0:
            raise ErroEscalonamento(f"Evento já agendado: {event!r}")
        event.seq = self._proximo_seq
        self._proximo_seq += 1
        heapq.heappush(self._heap, (event.fire_at, event.seq, event))
        self._pendentes += 1
        return event

    def agendar(
        self,
        fire_at: Timestamp,
        kind: EventKind,
        target: str,
        acao: Optional[Callable[[], None]] = None,
    ) -> Event:
        """Atalho: cria e agenda um Event novo."""
        if fire_at < self._agora:
            raise ErroEscalonamento(f"Evento no passado: fire_at={fire_at} < now={self._agora} ({target}, {kind.value})")
        evento = Event(fire_at, kind, target, acao)
        evento.seq = seq = self._proximo_seq
        self._proximo_seq = seq + 1
        heapq.heappush(self._heap, (fire_at, seq, evento))
        self._pendentes += 1
        return evento

    def cancel(self, handle: Optional[Event]) -> bool:
        """True se o evento estava pendente e foi removido."""
        if handle is None or not handle.pendente:
            return False
        handle.cancelado = True
        self._pendentes -= 1
        return True

    def run_until(self, limit: Timestamp) -> int:
        """
        Dispara, em ordem (fire_at, seq), todos os eventos com fire_at <= limit.
        Ao final o relógio vale limit. Retorna quantos eventos dispararam.
        """
        heap = self._heap
        disparados = 0
        while heap and heap[0][0] <= limit:
            fire_at, seq, evento = heapq.heappop(heap)
            if evento.cancelado:
                continue
            self._agora = fire_at
            evento.disparado = True
            self._pendentes -= 1
            disparados += 1
            if self._trace is not None:
                self._trace.write(f"{fire_at},{seq},{evento.target},{evento.kind.value}\n")
            if evento.acao is not None:
                evento.acao()
        if limit > self._agora:
            self._agora = limit
        self.total_disparados += disparados
        logger.debug("run_until(%d): %d eventos, %d pendentes", limit, disparados, self._pendentes)
        return disparados


__all__ = [
    'Timestamp',
    'US_POR_SEGUNDO',
    'segundos_para_us',
    'EventKind',
    'Event',
    'Escalonador',
]
