"""
Métricas de Atraso e Vazão - EdcaSim

Registra entregas (fila MAC da estação -> recepção no AP), descartes e
criações de pacotes durante a simulação e resume tudo em um RunReport
por fluxo e por classe de tráfego:
- Atraso médio exato (soma inteira em µs / n)
- Percentis por posto mais próximo (sem interpolação)
- Vazão sobre o intervalo ativo do fluxo
- Contagens de entregues, descartados e pendentes

summarize() é função pura da Coleta: mesma coleta, mesmo relatório.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.core.erros import ErroMetricas
from src.core.escalonador import Timestamp, US_POR_SEGUNDO
from src.core.trafego import Packet, TrafficClass

ORDEM_CLASSES = [c.value for c in TrafficClass]


# ============================================================================
# REGISTROS
# ============================================================================

class DelayRecord(NamedTuple):
    flow_id: str
    seq: int
    delay_us: int
    window: int
    created_at: Timestamp
    delivered_at: Timestamp
    size_bytes: int


@dataclass(frozen=True)
class DropRecord:
    flow_id: str
    seq: int
    created_at: Timestamp
    dropped_at: Timestamp
    causa: str  # 'retry' | 'queue'
    window: int


@dataclass(frozen=True)
class InfoFluxo:
    flow_id: str
    station: int
    traffic_class: str
    packet_size_bytes: int
    start_us: Timestamp
    stop_us: Optional[Timestamp]


@dataclass
class ChannelStats:
    """Estatísticas do canal e dos contendores ao fim da execução."""
    utilizacao: float = 0.0
    airtime_total_us: int = 0
    quadros: int = 0
    quadros_corrompidos: int = 0
    rodadas_contencao: int = 0
    rodadas_colisao: int = 0
    probabilidade_colisao: Optional[float] = None
    colisoes_virtuais: int = 0
    duplicatas_ap: int = 0
    quadros_por_acesso: Dict[str, Optional[float]] = field(default_factory=dict)


@dataclass
class Coleta:
    """Tudo o que uma execução produziu; entrada de summarize()."""
    scenario: str
    rep: int
    seed: int
    mac_mode: str
    duration_us: Timestamp
    warmup_us: Timestamp
    limites: List[Timestamp]
    entradas_estacoes: Dict[int, Timestamp]
    fluxos: List[InfoFluxo]
    criacoes: List[Tuple[str, int, Timestamp]]
    entregas: List[DelayRecord]
    descartes: List[DropRecord]
    pendentes: List[Tuple[str, int, Timestamp]]
    canal: ChannelStats = field(default_factory=ChannelStats)

    def janelas(self) -> List[Tuple[Timestamp, Timestamp]]:
        marcos = [0] + [t for t in self.limites if 0 < t < self.duration_us] + [self.duration_us]
        return list(zip(marcos[:-1], marcos[1:]))


class ColetorMetricas:
    """
    Acumula os registros de uma simulação.

    Janelas começam em cada instante de mudança de cenário > 0;
    cada registro cai na janela do seu próprio instante.
    """

    def __init__(self, limites: Sequence[Timestamp] = ()):
        self.limites: List[Timestamp] = sorted({int(t) for t in limites if t > 0})
        self.criacoes: List[Tuple[str, int, Timestamp]] = []
        self.entregas: List[DelayRecord] = []
        self.descartes: List[DropRecord] = []
        # cada fluxo passa por uma única fila FIFO: as entregas chegam em ordem de seq
        self._ultimo_entregue: Dict[str, int] = {}

    def janela_de(self, t: Timestamp) -> int:
        return bisect_right(self.limites, t)

    def foi_entregue(self, packet: Packet) -> bool:
        """Vale para pacotes ainda na MAC (na fila ou sendo descartados)."""
        return self._ultimo_entregue.get(packet.flow_id, -1) >= packet.seq

    def record_creation(self, packet: Packet) -> None:
        self.criacoes.append((packet.flow_id, packet.seq, packet.created_at))

    def record_delivery(self, packet: Packet, delivered_at: Timestamp) -> Optional[DelayRecord]:
        """
        Raises:
            ErroMetricas: entrega anterior à criação ou (flow_id, seq) repetido
        """
        if delivered_at < packet.created_at:
            raise ErroMetricas(
                f"{packet.flow_id}#{packet.seq}: entregue em {delivered_at} antes de criado em {packet.created_at}"
            )
        if self.foi_entregue(packet):
            raise ErroMetricas(f"{packet.flow_id}#{packet.seq}: entrega duplicada")
        self._ultimo_entregue[packet.flow_id] = packet.seq
        registro = DelayRecord(
            packet.flow_id,
            packet.seq,
            delivered_at - packet.created_at,
            self.janela_de(delivered_at),
            packet.created_at,
            delivered_at,
            packet.size_bytes,
        )
        self.entregas.append(registro)
        return registro

    def record_drop(self, packet: Packet, dropped_at: Timestamp, causa: str) -> Optional[DropRecord]:
        """Descarte na MAC. Ignorado se o AP já recebeu o pacote (ACK perdido)."""
        if self.foi_entregue(packet):
            return None
        registro = DropRecord(
            flow_id=packet.flow_id,
            seq=packet.seq,
            created_at=packet.created_at,
            dropped_at=dropped_at,
            causa=causa,
            window=self.janela_de(dropped_at),
        )
        self.descartes.append(registro)
        return registro


class ColetorContagem(ColetorMetricas):
    """Só conta entregas e descartes; para execuções longas em que só o canal interessa."""

    def __init__(self, limites: Sequence[Timestamp] = ()):
        super().__init__(limites)
        self.n_entregas = 0
        self.n_descartes = 0

    def record_creation(self, packet: Packet) -> None:
        pass

    def record_delivery(self, packet: Packet, delivered_at: Timestamp) -> None:
        self._ultimo_entregue[packet.flow_id] = packet.seq
        self.n_entregas += 1

    def record_drop(self, packet: Packet, dropped_at: Timestamp, causa: str) -> None:
        if not self.foi_entregue(packet):
            self.n_descartes += 1


# ============================================================================
# RELATÓRIO
# ============================================================================

@dataclass
class FlowStats:
    window: int
    flow_id: str
    station: int
    traffic_class: str
    created: int
    delivered: int
    dropped: int
    retry_drops: int
    queue_drops: int
    pending: int
    delivered_bytes: int
    mean_delay_us: Optional[float]
    p50_us: Optional[int]
    p95_us: Optional[int]
    max_us: Optional[int]
    throughput_bps: float


@dataclass
class ClassStats:
    window: int
    traffic_class: str
    flows: int
    created: int
    delivered: int
    dropped: int
    pending: int
    mean_delay_us: Optional[float]
    p50_us: Optional[int]
    p95_us: Optional[int]
    max_us: Optional[int]
    throughput_bps: float


@dataclass
class WindowInfo:
    index: int
    start_us: Timestamp
    end_us: Timestamp
    n_stations: int


@dataclass
class RunReport:
    scenario: str
    rep: int
    seed: int
    mac_mode: str
    n_stations: int
    duration_s: float
    warmup_s: float
    windows: List[WindowInfo]
    flows: List[FlowStats]
    classes: List[ClassStats]
    channel: ChannelStats

    def fluxo(self, flow_id: str, window: int = 0) -> Optional[FlowStats]:
        for f in self.flows:
            if f.flow_id == flow_id and f.window == window:
                return f
        return None

    def classe(self, traffic_class, window: int = 0) -> Optional[ClassStats]:
        rotulo = TrafficClass(traffic_class).value
        for c in self.classes:
            if c.traffic_class == rotulo and c.window == window:
                return c
        return None

    def mean_ms(self, traffic_class, window: int = 0) -> Optional[float]:
        c = self.classe(traffic_class, window)
        if c is None or c.mean_delay_us is None:
            return None
        return c.mean_delay_us / 1000.0


def percentil_nearest_rank(ordenados: np.ndarray, p: int) -> int:
    """Valor de posto ceil(p/100 * n) em uma amostra já ordenada."""
    n = len(ordenados)
    posto = max(1, -(-p * n // 100))
    return int(ordenados[posto - 1])


def estatisticas_atraso(delays: Sequence[int]) -> Tuple[Optional[float], Optional[int], Optional[int], Optional[int]]:
    """(média, p50, p95, máximo) em µs; tudo None para amostra vazia."""
    if len(delays) == 0:
        return None, None, None, None
    arr = np.sort(np.asarray(delays, dtype=np.int64))
    media = int(arr.sum()) / len(arr)
    return media, percentil_nearest_rank(arr, 50), percentil_nearest_rank(arr, 95), int(arr[-1])


def _vazao(bytes_entregues: int, inicio: Timestamp, fim: Timestamp) -> float:
    span = fim - inicio
    if span <= 0:
        return 0.0
    return 8 * bytes_entregues * US_POR_SEGUNDO / span


def summarize(coleta: Coleta, window: Optional[int] = None, segmentar: bool = True) -> RunReport:
    """
    Resume a coleta em um RunReport.

    Args:
        coleta: registros de uma execução
        window: índice de uma única janela; None = todas
        segmentar: False trata a execução inteira como a janela 0
    """
    duracao = coleta.duration_us
    warm = coleta.warmup_us
    janelas = coleta.janelas() if segmentar else [(0, duracao)]
    if window is not None and not 0 <= window < len(janelas):
        raise ErroMetricas(f"janela {window} inexistente (execução tem {len(janelas)})")
    indices = range(len(janelas)) if window is None else [window]
    limites = [inicio for inicio, _ in janelas[1:]]

    def idx(t: Timestamp) -> int:
        return bisect_right(limites, t)

    # agrupamento por (fluxo, janela)
    atrasos: Dict[Tuple[str, int], List[int]] = {}
    bytes_ok: Dict[Tuple[str, int], int] = {}
    criados: Dict[Tuple[str, int], int] = {}
    retry: Dict[Tuple[str, int], int] = {}
    fila: Dict[Tuple[str, int], int] = {}
    pendentes: Dict[Tuple[str, int], int] = {}

    for r in coleta.entregas:
        if r.created_at < warm:
            continue
        chave = (r.flow_id, idx(r.delivered_at))
        atrasos.setdefault(chave, []).append(r.delay_us)
        bytes_ok[chave] = bytes_ok.get(chave, 0) + r.size_bytes
    for flow_id, _, criado in coleta.criacoes:
        if criado >= warm:
            chave = (flow_id, idx(criado))
            criados[chave] = criados.get(chave, 0) + 1
    for d in coleta.descartes:
        if d.created_at < warm:
            continue
        destino = retry if d.causa == 'retry' else fila
        chave = (d.flow_id, idx(d.dropped_at))
        destino[chave] = destino.get(chave, 0) + 1
    ultima = len(janelas) - 1
    for flow_id, _, criado in coleta.pendentes:
        if criado >= warm:
            chave = (flow_id, ultima)
            pendentes[chave] = pendentes.get(chave, 0) + 1

    janelas_info: List[WindowInfo] = []
    fluxos: List[FlowStats] = []
    classes: List[ClassStats] = []
    for w in indices:
        w_inicio, w_fim = janelas[w]
        janelas_info.append(WindowInfo(
            index=w,
            start_us=w_inicio,
            end_us=w_fim,
            n_stations=sum(1 for t in coleta.entradas_estacoes.values() if t < w_fim),
        ))
        por_classe: Dict[str, List[FlowStats]] = {}
        atrasos_classe: Dict[str, List[int]] = {}
        for info in coleta.fluxos:
            chave = (info.flow_id, w)
            lista = atrasos.get(chave, [])
            media, p50, p95, maximo = estatisticas_atraso(lista)
            inicio = max(info.start_us, warm, w_inicio)
            fim = min(info.stop_us if info.stop_us is not None else duracao, duracao, w_fim)
            n_retry, n_fila = retry.get(chave, 0), fila.get(chave, 0)
            stats = FlowStats(
                window=w,
                flow_id=info.flow_id,
                station=info.station,
                traffic_class=info.traffic_class,
                created=criados.get(chave, 0),
                delivered=len(lista),
                dropped=n_retry + n_fila,
                retry_drops=n_retry,
                queue_drops=n_fila,
                pending=pendentes.get(chave, 0),
                delivered_bytes=bytes_ok.get(chave, 0),
                mean_delay_us=media,
                p50_us=p50,
                p95_us=p95,
                max_us=maximo,
                throughput_bps=_vazao(bytes_ok.get(chave, 0), inicio, fim),
            )
            fluxos.append(stats)
            por_classe.setdefault(info.traffic_class, []).append(stats)
            atrasos_classe.setdefault(info.traffic_class, []).extend(lista)

        for rotulo in sorted(por_classe, key=ORDEM_CLASSES.index):
            membros = por_classe[rotulo]
            media, p50, p95, maximo = estatisticas_atraso(atrasos_classe[rotulo])
            classes.append(ClassStats(
                window=w,
                traffic_class=rotulo,
                flows=len(membros),
                created=sum(m.created for m in membros),
                delivered=sum(m.delivered for m in membros),
                dropped=sum(m.dropped for m in membros),
                pending=sum(m.pending for m in membros),
                mean_delay_us=media,
                p50_us=p50,
                p95_us=p95,
                max_us=maximo,
                throughput_bps=sum(m.throughput_bps for m in membros),
            ))

    return RunReport(
        scenario=coleta.scenario,
        rep=coleta.rep,
        seed=coleta.seed,
        mac_mode=coleta.mac_mode,
        n_stations=len(coleta.entradas_estacoes),
        duration_s=duracao / US_POR_SEGUNDO,
        warmup_s=warm / US_POR_SEGUNDO,
        windows=janelas_info,
        flows=fluxos,
        classes=classes,
        channel=coleta.canal,
    )


__all__ = [
    'DelayRecord',
    'DropRecord',
    'InfoFluxo',
    'ChannelStats',
    'Coleta',
    'ColetorMetricas',
    'ColetorContagem',
    'FlowStats',
    'ClassStats',
    'WindowInfo',
    'RunReport',
    'percentil_nearest_rank',
    'estatisticas_atraso',
    'summarize',
]
