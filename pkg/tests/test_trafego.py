"""Testes das fontes de tráfego e da classificação em ACs."""

import pytest

from src.core.parametros import AcId
from src.core.trafego import FlowSpec, FonteCBR, TrafficClass, classify, rng_fluxo


def _cbr(tamanho=160, taxa=64_000, classe=TrafficClass.VOICE, inicio=0, fim=None, flow_id='f1'):
    return FlowSpec(
        flow_id=flow_id, station=1, traffic_class=classe, mode='cbr',
        packet_size_bytes=tamanho, rate_bps=taxa, start_at=inicio, stop_at=fim,
    )


def _chegadas(fonte, ate):
    instantes = []
    t = fonte.primeira_chegada()
    while t is not None and t < ate:
        instantes.append(t)
        t = fonte.next_arrival(t)
    return instantes


@pytest.mark.parametrize("classe, ac", [
    (TrafficClass.VOICE, AcId.VO),
    (TrafficClass.VIDEO, AcId.VI),
    (TrafficClass.BEST_EFFORT, AcId.BE),
    (TrafficClass.BACKGROUND, AcId.BK),
])
def test_classify(novo_pacote, classe, ac):
    assert classify(novo_pacote(classe=classe)) is ac


def test_de_rotulo():
    assert TrafficClass.de_rotulo('VOICE') is TrafficClass.VOICE
    assert TrafficClass.de_rotulo('best-effort') is TrafficClass.BEST_EFFORT
    with pytest.raises(ValueError, match="desconhecida"):
        TrafficClass.de_rotulo('gold')


# ============================================================================
# CBR
# ============================================================================

@pytest.mark.parametrize("tamanho, taxa, intervalo", [
    (160, 64_000, 20_000),
    (1280, 640_000, 16_000),
    (1500, 960_000, 12_500),
])
def test_intervalos_da_tabela(tamanho, taxa, intervalo):
    fonte = FonteCBR(_cbr(tamanho, taxa))
    assert fonte.intervalo_us == intervalo
    assert _chegadas(fonte, 4 * intervalo) == [0, intervalo, 2 * intervalo, 3 * intervalo]


def test_next_arrival_estritamente_posterior():
    fonte = FonteCBR(_cbr())
    assert fonte.primeira_chegada() == 0
    assert fonte.next_arrival(0) == 20_000
    assert fonte.next_arrival(19_999) == 20_000
    assert fonte.next_arrival(20_000) == 40_000


def test_taxa_media_exata_sem_acumular_resto():
    # intervalo de 2666,67 µs: o resto não pode se acumular
    fonte = FonteCBR(_cbr(tamanho=1000, taxa=3_000_000))
    assert len(_chegadas(fonte, 1_000_000)) == 375
    assert fonte.instante(375) == 1_000_000


def test_parada_do_fluxo():
    fonte = FonteCBR(_cbr(fim=40_000))
    assert _chegadas(fonte, 10**9) == [0, 20_000]
    assert fonte.next_arrival(20_000) is None


def test_inicio_posterior():
    fonte = FonteCBR(_cbr(inicio=5_000))
    assert fonte.primeira_chegada() == 5_000
    assert fonte.next_arrival(5_000) == 25_000


def test_defasagem_no_intervalo_e_deterministica():
    a = FonteCBR(_cbr(flow_id='s1-voice'), rng_fluxo(7, 's1-voice'))
    b = FonteCBR(_cbr(flow_id='s1-voice'), rng_fluxo(7, 's1-voice'))
    assert 0 <= a.offset < 20_000
    assert a.offset == b.offset
    assert a.primeira_chegada() == a.offset


def test_rng_fluxo_distinto_por_fluxo():
    a = rng_fluxo(1, 's1-voice').integers(0, 10**9, size=8)
    b = rng_fluxo(1, 's2-voice').integers(0, 10**9, size=8)
    assert list(a) != list(b)


def test_fluxo_saturado_nao_e_cbr():
    saturado = FlowSpec('f1', 1, TrafficClass.BACKGROUND, 'saturated', 1500)
    with pytest.raises(ValueError):
        FonteCBR(saturado)


def test_taxa_invalida():
    with pytest.raises(ValueError):
        FonteCBR(_cbr(taxa=0))


def test_ativo_em():
    fluxo = _cbr(inicio=100, fim=200)
    assert not fluxo.ativo_em(99)
    assert fluxo.ativo_em(100)
    assert fluxo.ativo_em(199)
    assert not fluxo.ativo_em(200)
    assert _cbr().ativo_em(10**12)
