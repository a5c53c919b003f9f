"""Testes do escalonador de eventos (relógio, ordem, cancelamento)."""

import io

import pytest

from src.core.erros import ErroEscalonamento
from src.core.escalonador import Escalonador, Event, EventKind, segundos_para_us


def _registrar(kernel, ordem, t, nome):
    return kernel.agendar(t, EventKind.ARRIVAL, nome, lambda: ordem.append((kernel.now(), nome)))


def test_ordem_por_tempo(kernel):
    ordem = []
    _registrar(kernel, ordem, 5, 'b')
    _registrar(kernel, ordem, 3, 'a')
    kernel.run_until(10)
    assert ordem == [(3, 'a'), (5, 'b')]


def test_empate_pela_ordem_de_insercao(kernel):
    ordem = []
    primeiro = _registrar(kernel, ordem, 5, 'primeiro')
    segundo = _registrar(kernel, ordem, 5, 'segundo')
    assert primeiro.seq < segundo.seq
    kernel.run_until(5)
    assert [nome for _, nome in ordem] == ['primeiro', 'segundo']


def test_evento_no_passado_rejeitado(kernel):
    kernel.run_until(10)
    with pytest.raises(ErroEscalonamento):
        kernel.agendar(9, EventKind.ARRIVAL, 'x')
    # também é um ValueError
    with pytest.raises(ValueError):
        kernel.agendar(0, EventKind.ARRIVAL, 'x')


def test_evento_reagendado_rejeitado(kernel):
    evento = Event(5, EventKind.ARRIVAL, 'x')
    kernel.schedule(evento)
    with pytest.raises(ErroEscalonamento):
        kernel.schedule(evento)


def test_cancelamento(kernel):
    ordem = []
    handle = _registrar(kernel, ordem, 5, 'cancelado')
    assert kernel.cancel(handle) is True
    assert kernel.cancel(handle) is False
    assert kernel.pendentes == 0
    kernel.run_until(10)
    assert ordem == []


def test_cancelar_evento_disparado(kernel):
    handle = kernel.agendar(1, EventKind.ARRIVAL, 'x')
    kernel.run_until(2)
    assert kernel.cancel(handle) is False
    assert kernel.cancel(None) is False


def test_fila_vazia_avanca_relogio(kernel):
    assert kernel.run_until(100) == 0
    assert kernel.now() == 100


def test_run_until_inclusivo(kernel):
    ordem = []
    for t in (10, 20, 30):
        _registrar(kernel, ordem, t, f"e{t}")
    assert kernel.run_until(20) == 2
    assert kernel.pendentes == 1
    assert kernel.now() == 20
    assert kernel.run_until(30) == 1


def test_encadeamento_causal(kernel):
    ordem = []

    def primeiro():
        ordem.append(kernel.now())
        kernel.agendar(15, EventKind.TX_END, 'b', lambda: ordem.append(kernel.now()))

    kernel.agendar(10, EventKind.TX_START, 'a', primeiro)
    assert kernel.run_until(20) == 2
    assert ordem == [10, 15]


def test_evento_no_instante_atual_dispara_depois_dos_ja_enfileirados(kernel):
    ordem = []

    def gerar():
        ordem.append('gerador')
        kernel.agendar(kernel.now(), EventKind.ARRIVAL, 'filho', lambda: ordem.append('filho'))

    kernel.agendar(5, EventKind.ARRIVAL, 'gerador', gerar)
    kernel.agendar(5, EventKind.ARRIVAL, 'irmao', lambda: ordem.append('irmao'))
    kernel.run_until(5)
    assert ordem == ['gerador', 'irmao', 'filho']


def test_rastro_de_eventos():
    saida = io.StringIO()
    kernel = Escalonador(trace=saida)
    kernel.agendar(7, EventKind.BACKOFF_SLOT, 'sta1')
    kernel.agendar(3, EventKind.ARRIVAL, 'fluxo')
    kernel.run_until(10)
    assert saida.getvalue().splitlines() == [
        "3,1,fluxo,arrival",
        "7,0,sta1,backoff-slot-boundary",
    ]


def test_mesma_sequencia_mesmo_resultado():
    def executar():
        kernel = Escalonador()
        ordem = []
        for i, t in enumerate([4, 1, 4, 2, 1]):
            _registrar(kernel, ordem, t, str(i))
        kernel.run_until(10)
        return ordem

    assert executar() == executar()


def test_segundos_para_us():
    assert segundos_para_us(1.5) == 1_500_000
    assert segundos_para_us(0.000001) == 1
