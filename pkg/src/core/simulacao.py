"""
Instância de Simulação - EdcaSim

Liga escalonador, meio, AP, estações e fontes de tráfego de um cenário
e executa até a duração configurada. Uma instância não compartilha estado
com nenhuma outra; pode ser criada em qualquer processo do pool.
"""

import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, TextIO

from src.core.cenarios import ScenarioConfig, StationSpec
from src.core.erros import ErroConfiguracao
from src.core.escalonador import Escalonador, Event, EventKind, Timestamp
from src.core.mac_dcf import EstacaoBase, EstacaoDcf
from src.core.mac_edca import AccessCategory, EstacaoEdca
from src.core.meio_fisico import MeioFisico, Transmission, FrameKind
from src.core.parametros import faixa_inclusiva
from src.core.ponto_acesso import PontoAcesso
from src.core.trafego import FlowSpec, FonteCBR, Packet, rng_fluxo
from src.validacao.metricas import ChannelStats, Coleta, ColetorContagem, ColetorMetricas, InfoFluxo

logger = logging.getLogger(__name__)


class Simulacao:
    """
    Uma execução determinística: (cenário, semente) -> Coleta.

    Uso:
        sim = Simulacao(config, seed=7)
        coleta = sim.executar()
    """

    def __init__(
        self,
        config: ScenarioConfig,
        seed: Optional[int] = None,
        rep: int = 0,
        trace: Optional[TextIO] = None,
        warmup_s: Optional[float] = None,
        apenas_contagem: bool = False,
    ):
        self.config = config
        self.seed = config.seed if seed is None else seed
        self.rep = rep
        self.warmup_us = config.warmup_us if warmup_s is None else int(round(warmup_s * 1_000_000))

        self.kernel = Escalonador(trace=trace)
        self.meio = MeioFisico(self.kernel, config.phy)
        limites = [m.at for m in config.changes]
        self.coletor = ColetorContagem(limites) if apenas_contagem else ColetorMetricas(limites)
        self.ap = PontoAcesso(self.kernel, self.meio, self.coletor)
        self.meio.definir_entrega(self._entregar)

        self.estacoes: Dict[int, EstacaoBase] = {}
        self.entradas: Dict[int, Timestamp] = {}
        self.fluxos: Dict[str, FlowSpec] = {}
        self._seq: Dict[str, int] = {}
        self._inclusivo = faixa_inclusiva(config.backoff_policy, config.mac_mode == 'edca')

        self.scenario_change(0, [], config.stations)
        for mudanca in config.changes:
            self.scenario_change(mudanca.at, [], mudanca.stations)

    # ------------------------------------------------------------------
    # Montagem
    # ------------------------------------------------------------------

    def scenario_change(
        self,
        at: Timestamp,
        add_flows: Sequence[FlowSpec],
        estacoes: Sequence[StationSpec] = (),
    ) -> Optional[Event]:
        """
        Ativa estações e fluxos exatamente em 'at'. Fluxos de estações
        ainda inexistentes criam a estação com os parâmetros do cenário.

        Raises:
            ErroConfiguracao: flow_id ou id de estação repetido, ou at < 0
        """
        if at < 0:
            raise ErroConfiguracao(f"instante de mudança negativo: {at}", campo='at_s')
        novos_fluxos = list(add_flows) + [f for s in estacoes for f in s.flows]
        if not novos_fluxos and not estacoes:
            return None
        ids = [f.flow_id for f in novos_fluxos]
        for flow_id in ids:
            if flow_id in self.fluxos or ids.count(flow_id) > 1:
                raise ErroConfiguracao(f"flow_id duplicado: {flow_id}", campo='flow_id')
        for s in estacoes:
            if s.station_id in self.entradas:
                raise ErroConfiguracao(f"id de estação duplicado: {s.station_id}", campo='id')
            self.entradas[s.station_id] = at
        for f in novos_fluxos:
            self.fluxos[f.flow_id] = f
            self._seq[f.flow_id] = 0
            self.entradas.setdefault(f.station, at)

        def aplicar():
            for s in estacoes:
                self._criar_estacao(s)
            for f in novos_fluxos:
                self._iniciar_fluxo(f)

        return self.kernel.agendar(at, EventKind.SCENARIO_CHANGE, "cenario", aplicar)

    def _criar_estacao(self, spec: StationSpec) -> EstacaoBase:
        if self.config.mac_mode == 'edca':
            estacao = EstacaoEdca(
                spec.station_id, self.kernel, self.meio, spec.edca, self.seed,
                dcf=spec.dcf, rts_cts=spec.rts_cts, inclusivo=self._inclusivo,
            )
        else:
            estacao = EstacaoDcf(
                spec.station_id, self.kernel, self.meio, spec.dcf, self.seed,
                rts_cts=spec.rts_cts, inclusivo=self._inclusivo,
            )
        estacao.definir_remocao(self._ao_remover)
        self.estacoes[spec.station_id] = estacao
        logger.debug("t=%d: estação %d ativa (%s)", self.kernel.now(), spec.station_id, self.config.mac_mode)
        return estacao

    def _estacao_de(self, flow: FlowSpec) -> EstacaoBase:
        estacao = self.estacoes.get(flow.station)
        if estacao is None:
            spec = StationSpec(
                station_id=flow.station, flows=(), dcf=self.config.dcf,
                edca=self.config.edca_params, rts_cts=self.config.rts_cts,
            )
            estacao = self._criar_estacao(spec)
        return estacao

    def _iniciar_fluxo(self, flow: FlowSpec) -> None:
        self._estacao_de(flow)
        agora = self.kernel.now()
        inicio = max(flow.start_at, agora)
        if flow.mode == 'cbr':
            rng = rng_fluxo(self.seed, flow.flow_id) if self.config.phase_offset else None
            fonte = FonteCBR(_com_inicio(flow, inicio), rng)
            primeira = fonte.primeira_chegada()
            if primeira is not None:
                self.kernel.agendar(primeira, EventKind.ARRIVAL, flow.flow_id, lambda: self._chegada_cbr(fonte))
        else:
            if flow.stop_at is None or inicio < flow.stop_at:
                self.kernel.agendar(inicio, EventKind.ARRIVAL, flow.flow_id, lambda: self._criar_pacote(flow))

    # ------------------------------------------------------------------
    # Tráfego
    # ------------------------------------------------------------------

    def _chegada_cbr(self, fonte: FonteCBR) -> None:
        self._criar_pacote(fonte.flow)
        proxima = fonte.next_arrival(self.kernel.now())
        if proxima is not None:
            self.kernel.agendar(proxima, EventKind.ARRIVAL, fonte.flow.flow_id, lambda: self._chegada_cbr(fonte))

    def _criar_pacote(self, flow: FlowSpec) -> Packet:
        seq = self._seq[flow.flow_id]
        self._seq[flow.flow_id] = seq + 1
        pacote = Packet(
            flow_id=flow.flow_id,
            seq=seq,
            size_bytes=flow.packet_size_bytes,
            created_at=self.kernel.now(),
            traffic_class=flow.traffic_class,
        )
        self.coletor.record_creation(pacote)
        if not self.estacoes[flow.station].enfileirar(pacote):
            self.coletor.record_drop(pacote, self.kernel.now(), 'queue')
        return pacote

    def _ao_remover(self, pacote: Packet, entregue: bool) -> None:
        agora = self.kernel.now()
        if not entregue:
            self.coletor.record_drop(pacote, agora, 'retry')
        flow = self.fluxos[pacote.flow_id]
        if flow.mode == 'saturated' and flow.ativo_em(agora):
            self._criar_pacote(flow)

    # ------------------------------------------------------------------
    # Meio
    # ------------------------------------------------------------------

    def _entregar(self, tx: Transmission) -> None:
        remetente = self.estacoes.get(tx.sender)
        if remetente is not None:
            remetente.fim_transmissao_propria(tx)
        if not tx.corrupted and tx.frame_kind in (FrameKind.RTS, FrameKind.CTS):
            fim_nav = self.kernel.now() + tx.duracao_nav_us
            for sid, estacao in self.estacoes.items():
                if sid != tx.sender and sid != tx.destino:
                    estacao.atualizar_nav(fim_nav)
        if tx.destino == self.ap.station_id:
            self.ap.receber(tx)
        else:
            destino = self.estacoes.get(tx.destino)
            if destino is not None:
                destino.receber(tx)

    # ------------------------------------------------------------------
    # Execução
    # ------------------------------------------------------------------

    def executar(self) -> Coleta:
        duracao = self.config.duration_us
        self.kernel.run_until(duracao)
        logger.debug(
            "%s rep=%d seed=%d: %d eventos em %d µs",
            self.config.name, self.rep, self.seed, self.kernel.total_disparados, duracao,
        )
        return self.coletar()

    def executar_rodadas(self, alvo: int, passo_us: Timestamp = 100_000) -> ChannelStats:
        """
        Avança em passos de passo_us até o meio somar alvo rodadas de
        contenção ou a duração do cenário acabar; devolve só o canal.
        """
        duracao = self.config.duration_us
        t = self.kernel.now()
        while self.meio.rodadas_contencao < alvo and t < duracao:
            t = min(t + passo_us, duracao)
            self.kernel.run_until(t)
        logger.debug(
            "%s seed=%d: %d rodadas em %d µs", self.config.name, self.seed, self.meio.rodadas_contencao, t,
        )
        return self._estatisticas_canal(t)

    def contendores(self) -> List:
        return [c for e in self.estacoes.values() for c in e.contendores]

    def coletar(self) -> Coleta:
        pendentes = [
            (p.flow_id, p.seq, p.created_at)
            for e in self.estacoes.values()
            for p in e.pacotes_em_fila()
            if not self.coletor.foi_entregue(p)
        ]
        fluxos = [
            InfoFluxo(
                flow_id=f.flow_id,
                station=f.station,
                traffic_class=f.traffic_class.value,
                packet_size_bytes=f.packet_size_bytes,
                start_us=f.start_at,
                stop_us=f.stop_at,
            )
            for f in self.fluxos.values()
        ]
        return Coleta(
            scenario=self.config.name,
            rep=self.rep,
            seed=self.seed,
            mac_mode=self.config.mac_mode,
            duration_us=self.config.duration_us,
            warmup_us=self.warmup_us,
            limites=list(self.coletor.limites),
            entradas_estacoes=dict(self.entradas),
            fluxos=fluxos,
            criacoes=list(self.coletor.criacoes),
            entregas=list(self.coletor.entregas),
            descartes=list(self.coletor.descartes),
            pendentes=pendentes,
            canal=self._estatisticas_canal(self.config.duration_us),
        )

    def _estatisticas_canal(self, duracao_us: Timestamp) -> ChannelStats:
        por_ac: Dict[str, List[int]] = {}
        for c in self.contendores():
            rotulo = c.ac_id.name if isinstance(c, AccessCategory) else 'DCF'
            soma = por_ac.setdefault(rotulo, [0, 0])
            soma[0] += c.quadros_ok
            soma[1] += c.acessos
        return ChannelStats(
            utilizacao=self.meio.utilizacao(duracao_us),
            airtime_total_us=self.meio.airtime_total_us,
            quadros=self.meio.quadros,
            quadros_corrompidos=self.meio.quadros_corrompidos,
            rodadas_contencao=self.meio.rodadas_contencao,
            rodadas_colisao=self.meio.rodadas_colisao,
            probabilidade_colisao=self.meio.probabilidade_colisao(),
            colisoes_virtuais=sum(c.colisoes_virtuais for c in self.contendores()),
            duplicatas_ap=self.ap.duplicatas,
            quadros_por_acesso={k: (ok / ac if ac else None) for k, (ok, ac) in sorted(por_ac.items())},
        )


def _com_inicio(flow: FlowSpec, inicio: Timestamp) -> FlowSpec:
    return flow if flow.start_at == inicio else replace(flow, start_at=inicio)


__all__ = ['Simulacao']
