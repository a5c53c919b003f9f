"""Testes do EDCA: AIFS, janela por AC, colisão virtual e rajadas TXOP."""

import pytest

from src.core.cenarios import parse_scenario
from src.core.erros import ErroEstado
from src.core.mac_edca import (
    AccessCategory,
    aifs_duration,
    continua_rajada,
    resolve_internal_collision,
    txop_burst,
    update_cw_on_failure,
)
from src.core.parametros import AcId, AcParams
from src.core.simulacao import Simulacao
from src.core.trafego import TrafficClass
from src.validacao.experimentos import run_scenario

from tests.conftest import EDCA_PADRAO, YAML_PARAMETROS


def _ac(kernel, phy, ac_id, params=None, seed=1):
    return AccessCategory(ac_id, params or EDCA_PADRAO[ac_id], 1, kernel, phy, seed)


def _cenario(fluxos: str, duracao: float = 0.5, edca_estacao: str = "") -> str:
    return (
        f"name: teste-edca\nmac_mode: edca\nduration_s: {duracao}\nphase_offset: false\n"
        f"backoff_policy: section\n{YAML_PARAMETROS}"
        f"stations:\n  - id: 1\n{edca_estacao}    flows:\n{fluxos}"
    )


def _fluxo(classe, tamanho, taxa=None, modo='cbr'):
    texto = f"      - class: {classe}\n        mode: {modo}\n        packet_size_bytes: {tamanho}\n"
    if taxa is not None:
        texto += f"        rate_bps: {taxa}\n"
    return texto


# ============================================================================
# AIFS E JANELA
# ============================================================================

@pytest.mark.parametrize("aifsn, esperado", [(2, 28), (3, 37), (7, 73), (9, 91), (14, 136)])
def test_aifs_duration(phy, aifsn, esperado):
    assert aifs_duration(aifsn, phy) == esperado
    assert aifs_duration(AcParams(15, 31, aifsn), phy) == esperado


def test_aifs_2_igual_difs(phy):
    assert aifs_duration(2, phy) == phy.difs_us


def test_aifs_da_access_category(kernel, phy):
    assert aifs_duration(_ac(kernel, phy, AcId.BE), phy) == 73
    assert _ac(kernel, phy, AcId.BK).aifs_us == 91


def test_aifsn_invalido(phy):
    with pytest.raises(ValueError):
        aifs_duration(0, phy)


def test_update_cw_on_failure(kernel, phy):
    vo = _ac(kernel, phy, AcId.VO)
    assert vo.cw == 7
    assert update_cw_on_failure(vo) == 15
    assert update_cw_on_failure(vo) == 15
    # faixa inclusiva [0, CW] no EDCA
    assert 0 <= vo.backoff_remaining <= 15

    vi = _ac(kernel, phy, AcId.VI)
    assert update_cw_on_failure(vi) == 31
    assert update_cw_on_failure(vi) == 31


def test_sucesso_volta_ao_cwmin_da_ac(kernel, phy, novo_pacote):
    vi = _ac(kernel, phy, AcId.VI)
    vi.enfileirar(novo_pacote(classe=TrafficClass.VIDEO), canal_livre=True)
    vi.marcar_aguardando()
    vi.on_tx_outcome(False)
    assert vi.cw == 31
    vi.marcar_aguardando()
    vi.on_tx_outcome(True)
    assert vi.cw == 15


# ============================================================================
# COLISÃO VIRTUAL
# ============================================================================

def test_resolve_internal_collision(kernel, phy):
    vo, vi, be, bk = (_ac(kernel, phy, a) for a in (AcId.VO, AcId.VI, AcId.BE, AcId.BK))

    vencedora, perdedoras = resolve_internal_collision({be, vo})
    assert vencedora is vo and perdedoras == [be]

    vencedora, perdedoras = resolve_internal_collision([vi])
    assert vencedora is vi and perdedoras == []

    vencedora, perdedoras = resolve_internal_collision([bk, be, vi])
    assert vencedora is vi
    assert set(perdedoras) == {be, bk}


def test_resolve_internal_collision_vazio():
    with pytest.raises(ErroEstado):
        resolve_internal_collision([])


def test_perdedora_segue_caminho_de_falha(kernel, phy, novo_pacote):
    be = _ac(kernel, phy, AcId.BE)
    be.enfileirar(novo_pacote(), canal_livre=True)
    be.falha_virtual()
    assert be.colisoes_virtuais == 1
    assert be.retry_count == 1
    assert be.cw == 63
    assert len(be.fila) == 1


def test_colisao_virtual_na_estacao():
    texto = _cenario(_fluxo('voice', 160, 1280) + _fluxo('video', 1280, 10240))
    sim = Simulacao(parse_scenario(texto), seed=1)
    sim.kernel.run_until(28)
    estacao = sim.estacoes[1]
    # VO e VI expiram juntas após AIFS[2]; só VO vai ao meio
    assert sim.meio.quadros == 1
    assert estacao.acs[AcId.VI].colisoes_virtuais == 1
    assert estacao.acs[AcId.VI].cw == 31

    coleta = sim.executar()
    assert sim.meio.quadros_corrompidos == 0
    atrasos = {r.flow_id: r.delay_us for r in coleta.entregas}
    assert atrasos['s1-voice'] == 28 + 48
    assert 's1-video' in atrasos
    assert coleta.canal.colisoes_virtuais == 1


# ============================================================================
# TXOP
# ============================================================================

def test_txop_zero_um_quadro(kernel, phy, novo_pacote):
    vi = _ac(kernel, phy, AcId.VI)
    for seq in range(5):
        vi.fila.append(novo_pacote(seq=seq, size=1280))
    assert txop_burst(vi, 0, phy) == 1


def test_txop_fila_vazia(kernel, phy):
    assert txop_burst(_ac(kernel, phy, AcId.VI), 3200, phy) == 0


def test_txop_admite_tres_trocas(kernel, phy, novo_pacote):
    vo = _ac(kernel, phy, AcId.VO)
    for seq in range(10):
        vo.fila.append(novo_pacote(seq=seq, size=160))
    # primeira troca: 48 + SIFS + 25; cada seguinte: SIFS + 48 + SIFS + 25
    tres = 83 + 2 * 93
    assert txop_burst(vo, tres, phy) == 3
    assert txop_burst(vo, tres + 92, phy) == 3
    assert txop_burst(vo, tres + 93, phy) == 4


def test_txop_primeiro_quadro_sempre_sai(kernel, phy, novo_pacote):
    vi = _ac(kernel, phy, AcId.VI)
    vi.fila.append(novo_pacote(size=1280))
    vi.fila.append(novo_pacote(seq=1, size=1280))
    assert txop_burst(vi, 100, phy) == 1


@pytest.mark.parametrize("limite, esperado", [(320, 1), (3200, 12), (4800, 18)])
def test_txop_em_unidades_de_32us(kernel, phy, novo_pacote, limite, esperado):
    vi = _ac(kernel, phy, AcId.VI)
    for seq in range(30):
        vi.fila.append(novo_pacote(seq=seq, size=1280))
    assert txop_burst(vi, limite, phy) == esperado


def test_rajada_txop_na_simulacao():
    edca = "    edca:\n      VI: {txop_limit_32us: 100}\n"
    texto = _cenario(_fluxo('video', 1280, modo='saturated'), duracao=0.2, edca_estacao=edca)
    relatorio = run_scenario(parse_scenario(texto), seed=1)
    quadros = relatorio.channel.quadros_por_acesso['VI']
    assert 11 < quadros <= 12
    assert relatorio.channel.quadros_corrompidos == 0


def test_sem_txop_um_quadro_por_acesso():
    texto = _cenario(_fluxo('video', 1280, modo='saturated'), duracao=0.2)
    relatorio = run_scenario(parse_scenario(texto), seed=1)
    assert 0.98 < relatorio.channel.quadros_por_acesso['VI'] <= 1.0


def test_span_da_rajada_em_uma_estacao():
    edca = "    edca:\n      VI: {txop_limit_32us: 100}\n"
    texto = _cenario(_fluxo('video', 1280, modo='saturated'), duracao=0.2, edca_estacao=edca)
    sim = Simulacao(parse_scenario(texto), seed=1)
    sim.executar()
    vi = sim.estacoes[1].acs[AcId.VI]
    # 12 trocas: 249 + 11 * (SIFS + 249)
    assert vi.maior_rajada_us == 3098
    assert vi.rajadas_multiplas > 0


def _duas_estacoes(fluxos: str, duracao: float, edca_estacao: str = "") -> str:
    estacoes = "".join(f"  - id: {sid}\n{edca_estacao}    flows:\n{fluxos}" for sid in (1, 2))
    return (
        f"name: teste-edca\nmac_mode: edca\nduration_s: {duracao}\nphase_offset: false\n"
        f"backoff_policy: section\n{YAML_PARAMETROS}stations:\n{estacoes}"
    )


@pytest.mark.parametrize("unidades, continua", [(3, False), (10, False), (50, True), (100, True), (150, True)])
def test_rajada_nunca_excede_o_txop(unidades, continua):
    edca = f"    edca:\n      VI: {{txop_limit_32us: {unidades}}}\n"
    texto = _duas_estacoes(_fluxo('video', 1280, modo='saturated'), 1.0, edca)
    sim = Simulacao(parse_scenario(texto), seed=3)
    sim.executar()
    assert sim.meio.quadros_corrompidos > 0
    for estacao in sim.estacoes.values():
        vi = estacao.acs[AcId.VI]
        assert vi.maior_rajada_us <= unidades * 32
        assert (vi.rajadas_multiplas > 0) is continua


def test_continua_rajada_e_a_regra_da_estacao(phy, novo_pacote):
    fila = [novo_pacote(seq=0, size=160)]
    # primeira troca termina em 83; a seguinte, em 83 + 93
    assert continua_rajada(fila, 0, 83, 176, phy)
    assert not continua_rajada(fila, 0, 83, 175, phy)
    assert not continua_rajada([], 0, 83, 5000, phy)
    assert not continua_rajada(fila, 0, 83, 0, phy)


# ============================================================================
# ESTAÇÃO SATURADA
# ============================================================================

def test_descarte_da_perdedora_na_arbitragem():
    # sem retransmissões, toda colisão virtual descarta o quadro BE e a
    # reposição saturada chega com a vencedora ainda por transmitir
    fluxos = _fluxo('voice', 1500, modo='saturated') + _fluxo('best-effort', 1500, modo='saturated')
    texto = _cenario(fluxos, duracao=2.0, edca_estacao="    retry_limit: 0\n")
    sim = Simulacao(parse_scenario(texto), seed=1)
    coleta = sim.executar()

    be = sim.estacoes[1].acs[AcId.BE]
    assert be.colisoes_virtuais > 0
    assert be.retry_drops == be.colisoes_virtuais
    assert sim.meio.quadros_corrompidos == 0
    descartes_be = [d for d in coleta.descartes if d.flow_id == 's1-best-effort']
    assert len(descartes_be) == be.retry_drops
    assert all(d.causa == 'retry' for d in descartes_be)


def test_prioridade_com_quatro_acs_saturadas():
    fluxos = "".join(
        _fluxo(classe, 1500, modo='saturated')
        for classe in ('voice', 'video', 'best-effort', 'background')
    )
    relatorio = run_scenario(parse_scenario(_cenario(fluxos, duracao=5.0)), seed=1)
    vazao = {c: relatorio.classe(c).throughput_bps for c in ('voice', 'video', 'best-effort', 'background')}
    assert vazao['voice'] > vazao['video'] > 0
    assert vazao['video'] >= vazao['best-effort'] >= vazao['background']


def test_escada_de_cw_ao_longo_das_falhas(monkeypatch):
    degraus = []
    original = AccessCategory._atualizar_cw_falha

    def registrando(ac):
        antes = ac.cw
        depois = original(ac)
        degraus.append((ac.ac_id, antes, depois, ac.cw_max))
        return depois

    monkeypatch.setattr(AccessCategory, '_atualizar_cw_falha', registrando)
    fluxos = _fluxo('voice', 1500, modo='saturated') + _fluxo('video', 1500, modo='saturated')
    sim = Simulacao(parse_scenario(_duas_estacoes(fluxos, 1.0)), seed=2)
    sim.executar()

    assert {ac for ac, *_ in degraus} == {AcId.VO, AcId.VI}
    for _, antes, depois, cw_max in degraus:
        assert depois <= cw_max
        assert depois >= (antes + 1) * 2 - 1 or depois == cw_max
    assert any(antes == depois == cw_max for _, antes, depois, cw_max in degraus)
    for estacao in sim.estacoes.values():
        for ac in estacao.acs.values():
            assert ac.maior_cw <= ac.cw_max
