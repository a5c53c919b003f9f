"""Testes da linha de comando: comandos, arquivos gerados e códigos de saída."""

import json

import pytest

from src.edcasim import (
    SAIDA_CONFIGURACAO,
    SAIDA_IO,
    SAIDA_OK,
    criar_parser,
    main,
)


def _executar(*argv):
    return main(['--no-banner', *argv])


def test_list_scenarios(pastas_temporarias, capsys):
    assert _executar('list-scenarios') == SAIDA_OK
    saida = capsys.readouterr().out
    for nome in ('dcf-baseline', 'edca-default', 'saturation', 'txop-sweep', 'aifs-sweep'):
        assert nome in saida


def test_run_grava_csv(pastas_temporarias):
    destino = pastas_temporarias / 'saida'
    codigo = _executar('run', '--scenario', 'edca-default', '--stations', '2',
                       '--duration', '0.3', '--reps', '1', '--out', str(destino))
    assert codigo == SAIDA_OK
    arquivo = destino / 'edca-default_seed1.csv'
    assert arquivo.exists()
    assert arquivo.read_text(encoding='utf-8').startswith('scenario,rep,seed,n_stations,window,flow_id,class,')


def test_run_com_replicacoes_grava_agregado(pastas_temporarias):
    destino = pastas_temporarias / 'saida'
    codigo = _executar('run', '--scenario', 'edca-default', '--stations', '2', '--duration', '0.2',
                       '--reps', '2', '--seed', '9', '--format', 'json', '--out', str(destino))
    assert codigo == SAIDA_OK
    relatorios = json.loads((destino / 'edca-default_seed9.json').read_text(encoding='utf-8'))
    assert [r['seed'] for r in relatorios] == [9, 10]
    assert (destino / 'edca-default_seed9_agregado.json').exists()


def test_run_registra_diario(pastas_temporarias):
    _executar('run', '--scenario', 'edca-default', '--stations', '1', '--duration', '0.1',
              '--reps', '1', '--out', str(pastas_temporarias / 'saida'))
    diarios = list((pastas_temporarias / 'logs').glob('execucao_*.jsonl'))
    assert len(diarios) == 1
    eventos = [json.loads(l)['evento'] for l in diarios[0].read_text(encoding='utf-8').splitlines()]
    assert eventos == ['simulacao_iniciada', 'simulacao_concluida']


def test_trace(pastas_temporarias):
    destino = pastas_temporarias / 'saida'
    codigo = _executar('run', '--scenario', 'dcf-baseline', '--stations', '2', '--duration', '0.05',
                       '--reps', '1', '--trace', '--out', str(destino))
    assert codigo == SAIDA_OK
    linhas = (destino / 'dcf-baseline_seed1_trace.csv').read_text(encoding='utf-8').splitlines()
    assert linhas[0] == 'time_us,seq,target,kind'
    assert linhas[1].split(',')[3] == 'scenario-change'
    tempos = [int(l.split(',')[0]) for l in linhas[1:]]
    assert tempos == sorted(tempos)


def test_trace_identico_entre_execucoes(pastas_temporarias):
    saidas = []
    for pasta in ('a', 'b'):
        destino = pastas_temporarias / pasta
        codigo = _executar('run', '--scenario', 'edca-default', '--stations', '3', '--duration', '0.2',
                           '--reps', '1', '--seed', '4', '--trace', '--out', str(destino))
        assert codigo == SAIDA_OK
        saidas.append((
            (destino / 'edca-default_seed4_trace.csv').read_bytes(),
            (destino / 'edca-default_seed4.csv').read_bytes(),
        ))
    assert len(saidas[0][0].splitlines()) > 100
    assert saidas[0] == saidas[1]


def test_cenario_invalido(pastas_temporarias, capsys):
    arquivo = pastas_temporarias / 'ruim.yaml'
    arquivo.write_text("name: ruim\nduration_s: 1\nsurpresa: 3\n", encoding='utf-8')
    assert _executar('run', '--scenario', str(arquivo)) == SAIDA_CONFIGURACAO
    erro = capsys.readouterr().err
    assert "surpresa" in erro
    assert "linha 3" in erro


def test_cenario_desconhecido(pastas_temporarias):
    assert _executar('run', '--scenario', 'nao-existe') == SAIDA_CONFIGURACAO


def test_aquecimento_maior_que_duracao(pastas_temporarias):
    codigo = _executar('run', '--scenario', 'edca-default', '--duration', '0.1', '--warmup', '0.2')
    assert codigo == SAIDA_CONFIGURACAO


def test_reps_invalido(pastas_temporarias):
    assert _executar('run', '--scenario', 'edca-default', '--duration', '0.1', '--reps', '0') == SAIDA_CONFIGURACAO


def test_saida_em_arquivo_existente(pastas_temporarias):
    ocupado = pastas_temporarias / 'ocupado'
    ocupado.write_text('x')
    codigo = _executar('run', '--scenario', 'edca-default', '--duration', '0.1', '--reps', '1',
                       '--out', str(ocupado))
    assert codigo == SAIDA_IO


def test_sweep(pastas_temporarias):
    destino = pastas_temporarias / 'saida'
    codigo = _executar('sweep', '--base', 'aifs-sweep', '--values', '3,14', '--duration', '0.2',
                       '--out', str(destino))
    assert codigo == SAIDA_OK
    assert (destino / 'aifs-sweep_aifsn_seed1_sweep.csv').exists()


def test_sweep_valores_invalidos(pastas_temporarias):
    assert _executar('sweep', '--base', 'aifs-sweep', '--values', '3,x') == SAIDA_CONFIGURACAO


def test_run_de_varredura_embutida(pastas_temporarias):
    destino = pastas_temporarias / 'saida'
    codigo = _executar('run', '--scenario', 'txop-sweep', '--duration', '0.1', '--out', str(destino))
    assert codigo == SAIDA_OK
    assert (destino / 'txop-sweep_txop_limit_32us_seed1_sweep.csv').exists()


def test_config(pastas_temporarias, capsys):
    assert _executar('config') == SAIDA_OK
    assert 'Parâmetros válidos' in capsys.readouterr().out


def test_oracle(pastas_temporarias):
    assert _executar('oracle', '--window', '8', '--rounds', '20000', '--workers', '1') == SAIDA_OK


def test_oracle_janela_invalida(pastas_temporarias):
    assert _executar('oracle', '--window', '0') == SAIDA_CONFIGURACAO


def test_oracle_rodadas_invalidas(pastas_temporarias):
    assert _executar('oracle', '--rounds', '0') == SAIDA_CONFIGURACAO


def test_argumento_desconhecido():
    with pytest.raises(SystemExit) as info:
        criar_parser().parse_args(['run', '--scenario', 'x', '--bogus'])
    assert info.value.code == 2


def test_subcomando_obrigatorio():
    with pytest.raises(SystemExit):
        main([])
