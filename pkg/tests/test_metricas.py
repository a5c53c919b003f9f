"""Testes do coletor de métricas, do resumo por janela e dos intervalos de confiança."""

import numpy as np
import pytest

from src.core.cenarios import parse_scenario
from src.core.erros import ErroMetricas
from src.core.metricas_confianca import (
    analisar_consistencia,
    calcular_intervalo_confianca,
    formatar_com_intervalo,
)
from src.core.trafego import TrafficClass
from src.validacao.experimentos import run_scenario
from src.validacao.metricas import (
    Coleta,
    ColetorContagem,
    ColetorMetricas,
    InfoFluxo,
    estatisticas_atraso,
    percentil_nearest_rank,
    summarize,
)

SEGUNDO = 1_000_000


def _info(flow_id='f1', classe='best-effort', tamanho=100, inicio=0, fim=None):
    return InfoFluxo(flow_id=flow_id, station=1, traffic_class=classe,
                     packet_size_bytes=tamanho, start_us=inicio, stop_us=fim)


def _coleta(coletor, fluxos, duracao=SEGUNDO, warmup=0, pendentes=()):
    return Coleta(
        scenario='teste', rep=0, seed=1, mac_mode='edca',
        duration_us=duracao, warmup_us=warmup,
        limites=list(coletor.limites),
        entradas_estacoes={1: 0},
        fluxos=list(fluxos),
        criacoes=list(coletor.criacoes),
        entregas=list(coletor.entregas),
        descartes=list(coletor.descartes),
        pendentes=list(pendentes),
    )


def _entregar(coletor, novo_pacote, seq, criado, entregue, flow_id='f1', size=100):
    pacote = novo_pacote(seq=seq, size=size, t=criado, flow_id=flow_id)
    coletor.record_creation(pacote)
    return coletor.record_delivery(pacote, entregue)


# ============================================================================
# ESTATÍSTICAS DE ATRASO
# ============================================================================

@pytest.mark.parametrize("amostra, media, p50, p95, maximo", [
    ([10, 20, 30], 20, 20, 30, 30),
    ([42], 42, 42, 42, 42),
    ([100, 200, 300, 400], 250, 200, 400, 400),
    ([30, 10, 20], 20, 20, 30, 30),
])
def test_estatisticas_posto_mais_proximo(amostra, media, p50, p95, maximo):
    assert estatisticas_atraso(amostra) == (media, p50, p95, maximo)


def test_amostra_vazia():
    assert estatisticas_atraso([]) == (None, None, None, None)


def test_percentil_sem_interpolacao():
    ordenados = np.arange(1, 101)
    assert percentil_nearest_rank(ordenados, 50) == 50
    assert percentil_nearest_rank(ordenados, 95) == 95
    assert percentil_nearest_rank(ordenados, 1) == 1


def test_media_exata_em_inteiros():
    media, *_ = estatisticas_atraso([1, 2])
    assert media == 1.5


# ============================================================================
# COLETOR
# ============================================================================

def test_record_delivery(novo_pacote):
    coletor = ColetorMetricas()
    registro = _entregar(coletor, novo_pacote, 0, 1_000, 2_250)
    assert registro.delay_us == 1_250
    assert registro.window == 0


def test_entrega_antes_da_criacao(novo_pacote):
    coletor = ColetorMetricas()
    with pytest.raises(ErroMetricas):
        coletor.record_delivery(novo_pacote(t=500), 499)


def test_entrega_duplicada(novo_pacote):
    coletor = ColetorMetricas()
    pacote = novo_pacote()
    coletor.record_delivery(pacote, 10)
    with pytest.raises(ErroMetricas, match="duplicada"):
        coletor.record_delivery(pacote, 20)


def test_descarte_depois_da_entrega_ignorado(novo_pacote):
    coletor = ColetorMetricas()
    pacote = novo_pacote()
    coletor.record_delivery(pacote, 10)
    assert coletor.record_drop(pacote, 50, 'retry') is None
    assert coletor.descartes == []


def test_janela_pelo_instante(novo_pacote):
    coletor = ColetorMetricas([0, 500_000, 800_000])
    assert coletor.limites == [500_000, 800_000]
    assert coletor.janela_de(499_999) == 0
    assert coletor.janela_de(500_000) == 1
    assert coletor.janela_de(900_000) == 2


def test_coletor_de_contagem(novo_pacote):
    coletor = ColetorContagem()
    primeiro, segundo = novo_pacote(seq=0), novo_pacote(seq=1)
    coletor.record_creation(primeiro)
    coletor.record_delivery(primeiro, 10)
    coletor.record_drop(primeiro, 20, 'retry')
    coletor.record_drop(segundo, 30, 'retry')
    assert (coletor.n_entregas, coletor.n_descartes) == (1, 1)
    assert coletor.foi_entregue(primeiro)
    assert not coletor.foi_entregue(segundo)
    assert coletor.criacoes == [] and coletor.entregas == [] and coletor.descartes == []


# ============================================================================
# RESUMO
# ============================================================================

def test_vazao_sobre_intervalo_ativo(novo_pacote):
    coletor = ColetorMetricas()
    _entregar(coletor, novo_pacote, 0, 0, 500)
    relatorio = summarize(_coleta(coletor, [_info()]))
    fluxo = relatorio.fluxo('f1')
    assert fluxo.delivered == 1
    assert fluxo.throughput_bps == 800.0
    assert fluxo.mean_delay_us == 500


def test_vazao_de_fluxo_que_para_cedo(novo_pacote):
    coletor = ColetorMetricas()
    _entregar(coletor, novo_pacote, 0, 0, 500)
    relatorio = summarize(_coleta(coletor, [_info(fim=SEGUNDO // 2)]))
    assert relatorio.fluxo('f1').throughput_bps == 1600.0


def test_aquecimento_excluido(novo_pacote):
    coletor = ColetorMetricas()
    _entregar(coletor, novo_pacote, 0, 100, 5_100)
    _entregar(coletor, novo_pacote, 1, 300_000, 301_000)
    relatorio = summarize(_coleta(coletor, [_info()], warmup=200_000))
    fluxo = relatorio.fluxo('f1')
    assert fluxo.delivered == 1
    assert fluxo.created == 1
    assert fluxo.mean_delay_us == 1_000
    assert relatorio.warmup_s == 0.2


def test_janelas_separadas_e_execucao_inteira(novo_pacote):
    coletor = ColetorMetricas([500_000])
    _entregar(coletor, novo_pacote, 0, 0, 1_000)
    _entregar(coletor, novo_pacote, 1, 100_000, 103_000)
    _entregar(coletor, novo_pacote, 2, 600_000, 602_000)
    coleta = _coleta(coletor, [_info()])

    relatorio = summarize(coleta)
    assert [w.index for w in relatorio.windows] == [0, 1]
    assert relatorio.windows[1].start_us == 500_000
    assert relatorio.fluxo('f1', 0).mean_delay_us == 2_000
    assert relatorio.fluxo('f1', 1).mean_delay_us == 2_000
    assert relatorio.fluxo('f1', 0).throughput_bps == pytest.approx(2 * 800 / 0.5)

    inteiro = summarize(coleta, segmentar=False)
    assert len(inteiro.windows) == 1
    # média ponderada pelo número de entregas de cada janela
    assert inteiro.fluxo('f1').mean_delay_us == 2_000
    assert inteiro.fluxo('f1').delivered == 3


def test_janela_unica(novo_pacote):
    coletor = ColetorMetricas([500_000])
    _entregar(coletor, novo_pacote, 0, 600_000, 601_000)
    relatorio = summarize(_coleta(coletor, [_info()]), window=1)
    assert [w.index for w in relatorio.windows] == [1]
    assert relatorio.fluxo('f1', 1).delivered == 1
    with pytest.raises(ErroMetricas):
        summarize(_coleta(coletor, [_info()]), window=2)


def test_agregado_por_classe(novo_pacote):
    coletor = ColetorMetricas()
    _entregar(coletor, novo_pacote, 0, 0, 1_000, flow_id='a')
    _entregar(coletor, novo_pacote, 0, 0, 3_000, flow_id='b')
    _entregar(coletor, novo_pacote, 1, 10_000, 12_000, flow_id='b')
    fluxos = [_info('a'), _info('b')]
    relatorio = summarize(_coleta(coletor, fluxos))
    classe = relatorio.classe(TrafficClass.BEST_EFFORT)
    assert classe.flows == 2
    assert classe.delivered == 3
    assert classe.mean_delay_us == 2_000
    assert relatorio.mean_ms('best-effort') == 2.0
    assert relatorio.classe('voice') is None


def test_descartes_e_pendentes(novo_pacote):
    coletor = ColetorMetricas()
    perdido = novo_pacote(seq=0)
    coletor.record_creation(perdido)
    coletor.record_drop(perdido, 700, 'retry')
    cheio = novo_pacote(seq=1, t=10)
    coletor.record_creation(cheio)
    coletor.record_drop(cheio, 10, 'queue')
    relatorio = summarize(_coleta(coletor, [_info()], pendentes=[('f1', 2, 900_000)]))
    fluxo = relatorio.fluxo('f1')
    assert (fluxo.retry_drops, fluxo.queue_drops, fluxo.dropped) == (1, 1, 2)
    assert fluxo.pending == 1
    assert fluxo.mean_delay_us is None
    assert fluxo.throughput_bps == 0.0


def test_resumo_e_funcao_pura(novo_pacote):
    coletor = ColetorMetricas()
    _entregar(coletor, novo_pacote, 0, 0, 1_000)
    coleta = _coleta(coletor, [_info()])
    assert summarize(coleta) == summarize(coleta)


def test_execucao_sem_fluxos():
    relatorio = run_scenario(parse_scenario("name: vazio\nduration_s: 1\n"), seed=1)
    assert relatorio.flows == []
    assert relatorio.classes == []
    assert relatorio.n_stations == 0
    canal = relatorio.channel
    assert canal.quadros == 0
    assert canal.utilizacao == 0.0
    assert canal.probabilidade_colisao is None
    assert canal.colisoes_virtuais == 0


# ============================================================================
# CONFIANÇA ENTRE REPLICAÇÕES
# ============================================================================

def test_intervalo_confianca():
    media, inferior, superior = calcular_intervalo_confianca([7.4, 7.6, 7.5])
    assert media == pytest.approx(7.5)
    assert inferior < media < superior
    assert superior - media == pytest.approx(media - inferior)


def test_intervalo_degenerado_com_uma_amostra():
    assert calcular_intervalo_confianca([3.0]) == (3.0, 3.0, 3.0)


def test_formatar_com_intervalo():
    texto = formatar_com_intervalo([2.0, 2.0, 2.0])
    assert texto == "2.00 ms (IC 95%: 2.00 - 2.00)"


@pytest.mark.parametrize("valores, esperado", [
    ([10.0, 10.1, 9.9], 'ALTA'),
    ([10.0, 13.0, 8.0], 'MÉDIA'),
    ([1.0, 10.0], 'BAIXA'),
    ([], 'INSUFICIENTE'),
])
def test_analisar_consistencia(valores, esperado):
    assert analisar_consistencia(valores)['consistencia'] == esperado
